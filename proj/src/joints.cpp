#include "kinemotion/joints.hpp"

#include <algorithm>

namespace kinemotion {

namespace {

constexpr std::array<std::string_view, kJointCount> kJointNames = {
    "PELVIS",        "SPINE_NAVEL",    "SPINE_CHEST", "NECK",        "CLAVICLE_LEFT", "SHOULDER_LEFT",
    "ELBOW_LEFT",    "WRIST_LEFT",     "HAND_LEFT",   "HANDTIP_LEFT", "THUMB_LEFT",   "CLAVICLE_RIGHT",
    "SHOULDER_RIGHT", "ELBOW_RIGHT",   "WRIST_RIGHT", "HAND_RIGHT",  "HANDTIP_RIGHT", "THUMB_RIGHT",
    "HIP_LEFT",      "KNEE_LEFT",      "ANKLE_LEFT",  "FOOT_LEFT",   "HIP_RIGHT",     "KNEE_RIGHT",
    "ANKLE_RIGHT",   "FOOT_RIGHT",     "HEAD",        "NOSE",        "EYE_LEFT",      "EAR_LEFT",
    "EYE_RIGHT",     "EAR_RIGHT",
};

using J = Joint;
constexpr std::array kHead = {J::Head, J::Nose, J::EyeLeft, J::EyeRight, J::EarLeft, J::EarRight};
constexpr std::array kBody = {J::Pelvis, J::SpineNavel, J::SpineChest, J::Neck, J::ClavicleLeft, J::ClavicleRight};
constexpr std::array kArmLeft = {J::ShoulderLeft, J::ElbowLeft, J::WristLeft};
constexpr std::array kArmRight = {J::ShoulderRight, J::ElbowRight, J::WristRight};
constexpr std::array kHandLeft = {J::HandLeft, J::HandTipLeft, J::ThumbLeft};
constexpr std::array kHandRight = {J::HandRight, J::HandTipRight, J::ThumbRight};
constexpr std::array kLegLeft = {J::HipLeft, J::KneeLeft, J::AnkleLeft};
constexpr std::array kLegRight = {J::HipRight, J::KneeRight, J::AnkleRight};
constexpr std::array kFootLeft = {J::FootLeft};
constexpr std::array kFootRight = {J::FootRight};

constexpr std::array<std::string_view, kGroupCount> kGroupNames = {
    "head", "body", "arm_L", "arm_R", "hand_L", "hand_R", "leg_L", "leg_R", "foot_L", "foot_R",
};

}  // namespace

std::string_view joint_name(std::size_t joint) {
    return joint < kJointCount ? kJointNames[joint] : std::string_view{"UNKNOWN"};
}

std::string_view group_name(BodyGroup g) { return kGroupNames[static_cast<std::size_t>(g)]; }

std::span<const Joint> group_members(BodyGroup g) {
    switch (g) {
        case BodyGroup::Head: return kHead;
        case BodyGroup::Body: return kBody;
        case BodyGroup::ArmLeft: return kArmLeft;
        case BodyGroup::ArmRight: return kArmRight;
        case BodyGroup::HandLeft: return kHandLeft;
        case BodyGroup::HandRight: return kHandRight;
        case BodyGroup::LegLeft: return kLegLeft;
        case BodyGroup::LegRight: return kLegRight;
        case BodyGroup::FootLeft: return kFootLeft;
        case BodyGroup::FootRight: return kFootRight;
    }
    return {};
}

BodyGroup group_of(Joint j) {
    for (std::size_t g = 0; g < kGroupCount; ++g) {
        auto members = group_members(static_cast<BodyGroup>(g));
        if (std::find(members.begin(), members.end(), j) != members.end()) return static_cast<BodyGroup>(g);
    }
    return BodyGroup::Body;  // unreachable: groups cover every joint
}

bool is_known_task(std::string_view task_id) {
    return std::find(kTaskIds.begin(), kTaskIds.end(), task_id) != kTaskIds.end();
}

std::size_t task_order(std::string_view task_id) {
    auto it = std::find(kTaskIds.begin(), kTaskIds.end(), task_id);
    return static_cast<std::size_t>(it - kTaskIds.begin());
}

}  // namespace kinemotion
