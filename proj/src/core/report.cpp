#include "core/report.hpp"

#include "core/error.hpp"
#include "core/report_json.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>

namespace illumest {

using json = nlohmann::ordered_json;

double quantize(double x)
{
    if (!std::isfinite(x))
        throw Error(ErrorCode::Internal, "report contains a non-finite value");
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.9g", x);
    const double q = std::strtod(buf, nullptr);
    return q == 0.0 ? 0.0 : q; // no negative zero in reports
}

namespace {

void q(double& x) { x = quantize(x); }
void q(std::optional<double>& x)
{
    if (x)
        q(*x);
}
void q(Point2d& p)
{
    q(p.row);
    q(p.col);
}
void q(Vec2& v)
{
    q(v.d_row);
    q(v.d_col);
}
template <class T>
void q(std::optional<T>& x)
{
    if (x)
        q(*x);
}

json opt(const std::optional<double>& x)
{
    return x ? json(*x) : json(nullptr);
}

json to_j(const Point2d& p)
{
    return json{{"row", p.row}, {"col", p.col}};
}

json to_j(const Vec2& v)
{
    return json{{"d_row", v.d_row}, {"d_col", v.d_col}};
}

Point2d point_from(const json& j)
{
    return {j.at("row").get<double>(), j.at("col").get<double>()};
}

Vec2 vec_from(const json& j)
{
    return {j.at("d_row").get<double>(), j.at("d_col").get<double>()};
}

std::optional<double> opt_double(const json& j, const char* key)
{
    const json& v = j.at(key);
    if (v.is_null())
        return std::nullopt;
    return v.get<double>();
}

template <class T, class F>
std::optional<T> opt_obj(const json& j, const char* key, F&& from)
{
    const json& v = j.at(key);
    if (v.is_null())
        return std::nullopt;
    return from(v);
}

json wasserstein_json(const WassersteinSection& w)
{
    return json{
        {"w2", w.w2},
        {"ot_eps", w.ot_eps},
        {"divergence", w.divergence},
        {"blur", w.blur},
        {"iters", w.iters},
        {"converged", w.converged},
        {"marginal_err", w.marginal_err},
        {"subsampled", w.subsampled},
        {"normalized", w.normalized},
        {"n_source", w.n_source},
        {"n_reference", w.n_reference},
    };
}

WassersteinSection wasserstein_from(const json& j)
{
    WassersteinSection w;
    w.w2 = j.at("w2").get<double>();
    w.ot_eps = j.at("ot_eps").get<double>();
    w.divergence = j.at("divergence").get<double>();
    w.blur = j.at("blur").get<double>();
    w.iters = j.at("iters").get<int>();
    w.converged = j.at("converged").get<bool>();
    w.marginal_err = j.at("marginal_err").get<double>();
    w.subsampled = j.at("subsampled").get<bool>();
    w.normalized = j.at("normalized").get<bool>();
    w.n_source = j.at("n_source").get<std::size_t>();
    w.n_reference = j.at("n_reference").get<std::size_t>();
    return w;
}

json aux_json(const AuxSection& a)
{
    json clusters = json::array();
    for (const ClusterEntry& c : a.clusters)
        clusters.push_back(json{{"centroid", to_j(c.centroid)},
                                {"size", c.size},
                                {"dir", to_j(c.direction)},
                                {"angle_div_deg", opt(c.angle_div_deg)}});
    return json{
        {"brightest_px", json{{"row", a.brightest_px.row}, {"col", a.brightest_px.col}}},
        {"brightest_dir", to_j(a.brightest_dir)},
        {"cos_sim_brightest_vs_centroid", opt(a.cos_sim_brightest_vs_centroid)},
        {"gradient_dir", a.gradient_dir ? to_j(*a.gradient_dir) : json(nullptr)},
        {"gradient_angle_diff_deg", opt(a.gradient_angle_diff_deg)},
        {"clusters", clusters},
        {"mean_diff", json{{"x", a.mean_diff_x}, {"y", a.mean_diff_y}}},
        {"variance_ratio", opt(a.variance_ratio)},
        {"variance",
         json{{"bright_x", a.var_x_bright},
              {"bright_y", a.var_y_bright},
              {"reference_x", a.var_x_reference},
              {"reference_y", a.var_y_reference}}},
        {"hausdorff_px", a.hausdorff_px},
        {"hausdorff_subsampled", a.hausdorff_subsampled},
    };
}

AuxSection aux_from(const json& j)
{
    AuxSection a;
    a.brightest_px = {j.at("brightest_px").at("row").get<int>(),
                      j.at("brightest_px").at("col").get<int>()};
    a.brightest_dir = vec_from(j.at("brightest_dir"));
    a.cos_sim_brightest_vs_centroid = opt_double(j, "cos_sim_brightest_vs_centroid");
    a.gradient_dir = opt_obj<Vec2>(j, "gradient_dir", vec_from);
    a.gradient_angle_diff_deg = opt_double(j, "gradient_angle_diff_deg");
    for (const json& c : j.at("clusters"))
        a.clusters.push_back({point_from(c.at("centroid")), c.at("size").get<std::size_t>(),
                              vec_from(c.at("dir")), opt_double(c, "angle_div_deg")});
    a.mean_diff_x = j.at("mean_diff").at("x").get<double>();
    a.mean_diff_y = j.at("mean_diff").at("y").get<double>();
    a.variance_ratio = opt_double(j, "variance_ratio");
    const json& v = j.at("variance");
    a.var_x_bright = v.at("bright_x").get<double>();
    a.var_y_bright = v.at("bright_y").get<double>();
    a.var_x_reference = v.at("reference_x").get<double>();
    a.var_y_reference = v.at("reference_y").get<double>();
    a.hausdorff_px = j.at("hausdorff_px").get<double>();
    a.hausdorff_subsampled = j.at("hausdorff_subsampled").get<bool>();
    return a;
}

} // namespace

void quantize_report(IlluminationReport& r)
{
    q(r.centroid);
    q(r.center);
    q(r.direction);
    q(r.angle_deg);
    if (r.wasserstein) {
        auto& w = *r.wasserstein;
        q(w.w2);
        q(w.ot_eps);
        q(w.divergence);
        q(w.blur);
        q(w.marginal_err);
    }
    if (r.aux) {
        auto& a = *r.aux;
        q(a.brightest_dir);
        q(a.cos_sim_brightest_vs_centroid);
        q(a.gradient_dir);
        q(a.gradient_angle_diff_deg);
        for (auto& c : a.clusters) {
            q(c.centroid);
            q(c.direction);
            q(c.angle_div_deg);
        }
        q(a.mean_diff_x);
        q(a.mean_diff_y);
        q(a.variance_ratio);
        q(a.var_x_bright);
        q(a.var_y_bright);
        q(a.var_x_reference);
        q(a.var_y_reference);
        q(a.hausdorff_px);
    }
    q(r.runtime_ms);
}

json report_json_value(const IlluminationReport& r, bool include_runtime)
{
    json j;
    j["input_path"] = r.input_path;
    j["width"] = r.width;
    j["height"] = r.height;
    j["threshold_mode"] = r.threshold_mode == ThresholdMode::Otsu ? "otsu" : "fixed";
    j["threshold_used"] = r.threshold_used;
    j["n_bright"] = r.n_bright;
    j["warning"] = r.warning ? json(*r.warning) : json(nullptr);
    j["centroid"] = r.centroid ? to_j(*r.centroid) : json(nullptr);
    j["center"] = r.center ? to_j(*r.center) : json(nullptr);
    j["direction"] = r.direction ? to_j(*r.direction) : json(nullptr);
    j["angle_deg"] = opt(r.angle_deg);
    j["wasserstein"] = r.wasserstein ? wasserstein_json(*r.wasserstein) : json(nullptr);
    j["aux"] = r.aux ? aux_json(*r.aux) : json(nullptr);
    j["seed"] = r.seed;
    j["tool_version"] = r.tool_version;
    if (include_runtime)
        j["runtime_ms"] = r.runtime_ms;
    return j;
}

IlluminationReport report_from_json_value(const json& j)
{
    IlluminationReport r;
    r.input_path = j.at("input_path").get<std::string>();
    r.width = j.at("width").get<int>();
    r.height = j.at("height").get<int>();
    const auto mode = j.at("threshold_mode").get<std::string>();
    if (mode != "fixed" && mode != "otsu")
        throw Error(ErrorCode::InvalidParam, "report JSON: unknown threshold_mode " + mode);
    r.threshold_mode = mode == "otsu" ? ThresholdMode::Otsu : ThresholdMode::Fixed;
    r.threshold_used = j.at("threshold_used").get<int>();
    r.n_bright = j.at("n_bright").get<std::size_t>();
    if (!j.at("warning").is_null())
        r.warning = j.at("warning").get<std::string>();
    r.centroid = opt_obj<Point2d>(j, "centroid", point_from);
    r.center = opt_obj<Point2d>(j, "center", point_from);
    r.direction = opt_obj<Vec2>(j, "direction", vec_from);
    r.angle_deg = opt_double(j, "angle_deg");
    r.wasserstein = opt_obj<WassersteinSection>(j, "wasserstein", wasserstein_from);
    r.aux = opt_obj<AuxSection>(j, "aux", aux_from);
    r.seed = j.at("seed").get<std::uint64_t>();
    r.tool_version = j.at("tool_version").get<std::string>();
    r.runtime_ms = j.contains("runtime_ms") ? j.at("runtime_ms").get<double>() : 0.0;
    return r;
}

std::string report_to_json(const IlluminationReport& report, bool include_runtime, int indent)
{
    return report_json_value(report, include_runtime).dump(indent);
}

IlluminationReport report_from_json(const std::string& text)
{
    try {
        return report_from_json_value(json::parse(text));
    } catch (const json::exception& e) {
        throw Error(ErrorCode::InvalidParam, std::string("report JSON: ") + e.what());
    }
}

} // namespace illumest
