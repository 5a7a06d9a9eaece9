#include "sensorassoc/model_io.hpp"

#include <json.hpp>

namespace sensorassoc {

using nlohmann::ordered_json;

namespace {

ordered_json point_json(const Point2& p) { return ordered_json::array({p[0], p[1]}); }

}  // namespace

std::string kmeans_model_json(const KMeansModel& model) {
    ordered_json j;
    j["model"] = "kmeans";
    j["k"] = model.centers.size();
    auto centers = ordered_json::array();
    for (const auto& c : model.centers) centers.push_back(point_json(c));
    j["centers"] = std::move(centers);
    j["assignments"] = model.assignments;
    j["cost_history"] = model.cost_history;
    j["iterations_run"] = model.iterations_run;
    j["best_restart"] = model.best_restart;
    return j.dump(2) + "\n";
}

std::string ova_model_json(const OvaSvmModel& model) {
    ordered_json j;
    j["model"] = "one_vs_all_svm";
    j["kernel"] = {{"kind", to_string(model.kernel.kind)}, {"offset", model.kernel.offset}};
    j["C"] = model.C;
    j["scaling"] = {{"mean", point_json(model.scaling.mean)}, {"scale", point_json(model.scaling.scale)}};
    auto classes = ordered_json::array();
    for (std::size_t c = 0; c < model.class_models.size(); ++c) {
        const auto& m = model.class_models[c];
        ordered_json cj;
        cj["class_id"] = model.class_ids[c];
        cj["bias"] = m.bias;
        cj["iterations"] = m.iterations;
        cj["converged"] = m.converged;
        auto svs = ordered_json::array();
        for (const auto& sv : m.support_vectors) svs.push_back(point_json(sv));
        cj["support_vectors"] = std::move(svs);
        cj["support_labels"] = m.support_labels;
        cj["alphas"] = m.alphas;
        classes.push_back(std::move(cj));
    }
    j["classes"] = std::move(classes);
    return j.dump(2) + "\n";
}

}  // namespace sensorassoc
