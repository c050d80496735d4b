#include "kinemotion/model_io.hpp"

#include <json.hpp>

#include "kinemotion/errors.hpp"

namespace kinemotion {

namespace {

using nlohmann::json;

json header(std::string_view kind) {
    return json{{"format", "kinemotion-model"}, {"version", kModelFormatVersion}, {"kind", kind}};
}

json parse_checked(std::string_view text, std::string_view kind) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::exception& e) {
        throw FormatError(std::string("model file is not valid JSON: ") + e.what());
    }
    if (j.value("format", "") != "kinemotion-model") throw FormatError("not a kinemotion model file");
    if (j.value("version", -1) != kModelFormatVersion) throw FormatError("unsupported model format version");
    if (j.value("kind", "") != kind) throw FormatError("model kind is not '" + std::string(kind) + "'");
    return j;
}

}  // namespace

std::string serialize_model(const LinearSvmPipeline& model) {
    json j = header("svm");
    j["scaler_mean"] = model.scaler.mean();
    j["scaler_sd"] = model.scaler.sd();
    j["weights"] = model.model.weights;
    j["bias"] = model.model.bias;
    j["C"] = model.model.C;
    j["selected_features"] = model.model.selected_features;
    return j.dump(1);
}

std::string serialize_model(const ForestModel& model) {
    json j = header("forest");
    j["max_depth"] = model.max_depth;
    j["seed"] = model.seed;
    json trees = json::array();
    for (const auto& t : model.trees) {
        json nodes = json::array();
        for (const auto& n : t.nodes) nodes.push_back({n.feature, n.threshold, n.left, n.right, n.positive_fraction});
        trees.push_back(std::move(nodes));
    }
    j["trees"] = std::move(trees);
    return j.dump();
}

LinearSvmPipeline deserialize_svm(std::string_view text) {
    const json j = parse_checked(text, "svm");
    try {
        LinearSvmPipeline p;
        p.scaler = Standardizer(j.at("scaler_mean").get<std::vector<double>>(), j.at("scaler_sd").get<std::vector<double>>());
        p.model.weights = j.at("weights").get<std::vector<double>>();
        p.model.bias = j.at("bias").get<double>();
        p.model.C = j.at("C").get<double>();
        p.model.selected_features = j.at("selected_features").get<std::vector<std::size_t>>();
        if (p.model.weights.size() != p.model.selected_features.size()) throw FormatError("weights and features differ in length");
        return p;
    } catch (const json::exception& e) {
        throw FormatError(std::string("damaged svm model: ") + e.what());
    }
}

ForestModel deserialize_forest(std::string_view text) {
    const json j = parse_checked(text, "forest");
    try {
        ForestModel m;
        m.max_depth = j.at("max_depth").get<int>();
        m.seed = j.at("seed").get<std::uint64_t>();
        for (const auto& jt : j.at("trees")) {
            DecisionTree t;
            for (const auto& jn : jt) {
                t.nodes.push_back({jn.at(0).get<int>(), jn.at(1).get<double>(), jn.at(2).get<int>(), jn.at(3).get<int>(),
                                   jn.at(4).get<double>()});
            }
            m.trees.push_back(std::move(t));
        }
        return m;
    } catch (const json::exception& e) {
        throw FormatError(std::string("damaged forest model: ") + e.what());
    }
}

}  // namespace kinemotion
