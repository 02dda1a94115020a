#include "stabgreedy/io.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <limits>
#include <map>
#include <sstream>

#include "stabgreedy/error.hpp"
#include "stabgreedy/rng.hpp"

namespace stabgreedy::io {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return {};
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

std::vector<std::string> split(const std::string& line) {
    std::vector<std::string> out;
    std::string cell;
    std::istringstream ss(line);
    while (std::getline(ss, cell, ',')) out.push_back(trim(cell));
    if (!line.empty() && line.back() == ',') out.emplace_back();
    return out;
}

// Reads comment metadata and the header; leaves the stream at the first data row.
struct CsvHead {
    std::map<std::string, std::string> meta;
    std::vector<std::string> header;
};

CsvHead read_head(std::istream& is) {
    CsvHead head;
    std::string line;
    while (std::getline(is, line)) {
        const std::string t = trim(line);
        if (t.empty()) continue;
        if (t.front() == '#') {
            const auto colon = t.find(':');
            if (colon != std::string::npos) {
                head.meta[trim(t.substr(1, colon - 1))] = trim(t.substr(colon + 1));
            }
            continue;
        }
        head.header = split(t);
        return head;
    }
    throw Error(ErrorCode::Io, "CSV without header");
}

bool next_row(std::istream& is, std::vector<std::string>& cells) {
    std::string line;
    while (std::getline(is, line)) {
        const std::string t = trim(line);
        if (t.empty() || t.front() == '#') continue;
        cells = split(t);
        return true;
    }
    return false;
}

void write_meta(std::ostream& os, const Metadata& meta) {
    for (const auto& [k, v] : meta) os << "# " << k << ": " << v << '\n';
}

double json_number(const json& j) {
    if (j.is_null()) return kNaN;
    return j.get<double>();
}

json json_number_or_null(double v) {
    if (std::isfinite(v)) return v;
    return nullptr;
}

Metadata trace_metadata(const RunTrace& trace) {
    Metadata meta = {{"kernel", trace.kernel},
                     {"gamma", format_double(trace.gamma)},
                     {"rule", trace.rule},
                     {"seed", std::to_string(trace.seed)},
                     {"stop_reason", std::string(stop_reason_name(trace.stop_reason))},
                     {"dim", std::to_string(trace.dim)},
                     {"rng", std::string(Rng::kGeneratorName)}};
    if (!trace.target.empty()) meta.emplace_back("target", trace.target);
    if (trace.gamma == 0.0) meta.emplace_back("label", "unstabilized");
    return meta;
}

}  // namespace

std::string format_double(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[64];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, ptr);
}

double parse_double(const std::string& text) {
    const std::string t = trim(text);
    if (t == "nan" || t.empty()) return kNaN;
    if (t == "inf") return std::numeric_limits<double>::infinity();
    if (t == "-inf") return -std::numeric_limits<double>::infinity();
    double v = 0.0;
    auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
    if (ec != std::errc() || ptr != t.data() + t.size()) {
        throw Error(ErrorCode::Io, "not a number: '" + t + "'");
    }
    return v;
}

// --- point clouds ---------------------------------------------------------------

void write_points_csv(std::ostream& os, const PointCloud& points, const Metadata& meta) {
    write_meta(os, meta);
    const bool labelled = !points.labels().empty();
    for (std::size_t k = 0; k < points.dim(); ++k) os << (k ? "," : "") << 'x' << k;
    if (labelled) os << ",label";
    os << '\n';
    for (std::size_t i = 0; i < points.size(); ++i) {
        const auto p = points[i];
        for (std::size_t k = 0; k < p.size(); ++k) os << (k ? "," : "") << format_double(p[k]);
        if (labelled) os << ',' << points.labels()[i];
        os << '\n';
    }
}

PointCloud read_points_csv(std::istream& is) {
    const CsvHead head = read_head(is);
    std::size_t dim = 0;
    while (dim < head.header.size() && head.header[dim] == "x" + std::to_string(dim)) ++dim;
    if (dim == 0) throw Error(ErrorCode::Io, "point CSV header must start with x0");
    const bool labelled = head.header.size() == dim + 1 && head.header[dim] == "label";
    if (!labelled && head.header.size() != dim) throw Error(ErrorCode::Io, "unexpected point CSV columns");
    std::vector<double> coords;
    std::vector<std::string> labels;
    std::vector<std::string> cells;
    while (next_row(is, cells)) {
        if (cells.size() != head.header.size()) throw Error(ErrorCode::Io, "ragged point CSV row");
        for (std::size_t k = 0; k < dim; ++k) coords.push_back(parse_double(cells[k]));
        if (labelled) labels.push_back(cells[dim]);
    }
    PointCloud out(dim, std::move(coords));
    if (labelled) out.set_labels(std::move(labels));
    return out;
}

json points_to_json(const PointCloud& points) {
    json pts = json::array();
    for (std::size_t i = 0; i < points.size(); ++i) {
        const auto p = points[i];
        pts.push_back(std::vector<double>(p.begin(), p.end()));
    }
    json j = {{"dim", points.dim()}, {"points", std::move(pts)}};
    if (!points.labels().empty()) j["labels"] = points.labels();
    return j;
}

PointCloud points_from_json(const json& j) {
    try {
        const std::size_t dim = j.at("dim").get<std::size_t>();
        std::vector<double> coords;
        for (const auto& p : j.at("points")) {
            const auto row = p.get<std::vector<double>>();
            if (row.size() != dim) throw Error(ErrorCode::Io, "point JSON row has wrong dimension");
            coords.insert(coords.end(), row.begin(), row.end());
        }
        PointCloud out(dim, std::move(coords));
        if (j.contains("labels")) out.set_labels(j.at("labels").get<std::vector<std::string>>());
        return out;
    } catch (const json::exception& e) {
        throw Error(ErrorCode::Io, std::string("malformed point JSON: ") + e.what());
    }
}

void save_points(const std::filesystem::path& path, const PointCloud& points, const Metadata& meta) {
    if (path.extension() == ".json") {
        json j = points_to_json(points);
        if (!meta.empty()) {
            json m = json::object();
            for (const auto& [k, v] : meta) m[k] = v;
            j["metadata"] = std::move(m);
        }
        write_json(path, j);
        return;
    }
    std::ostringstream os;
    write_points_csv(os, points, meta);
    write_text(path, os.str());
}

PointCloud load_points(const std::filesystem::path& path) {
    if (path.extension() == ".json") return points_from_json(read_json(path));
    std::ifstream is(path);
    if (!is) throw Error(ErrorCode::Io, "cannot open " + path.string());
    return read_points_csv(is);
}

std::vector<double> read_values_csv(std::istream& is) {
    const CsvHead head = read_head(is);
    if (head.header.size() != 1 || head.header[0] != "f") {
        throw Error(ErrorCode::Io, "target CSV needs the single header 'f'");
    }
    std::vector<double> out;
    std::vector<std::string> cells;
    while (next_row(is, cells)) {
        if (cells.size() != 1) throw Error(ErrorCode::Io, "target CSV rows have one column");
        out.push_back(parse_double(cells[0]));
    }
    return out;
}

std::vector<double> load_values(const std::filesystem::path& path) {
    std::ifstream is(path);
    if (!is) throw Error(ErrorCode::Io, "cannot open " + path.string());
    return read_values_csv(is);
}

// --- traces ---------------------------------------------------------------------

void write_trace_csv(std::ostream& os, const RunTrace& trace, const Metadata& extra) {
    write_meta(os, trace_metadata(trace));
    write_meta(os, extra);
    os << "n,chosen_index";
    for (std::size_t k = 0; k < trace.dim; ++k) os << ",x" << k;
    os << ",p_max,r_max,fill,sep,lambda_min_upper,cond,restricted_size\n";
    for (const auto& r : trace.rows) {
        os << r.n << ',' << r.chosen_index;
        for (double c : r.coords) os << ',' << format_double(c);
        os << ',' << format_double(r.p_max) << ',' << format_double(r.r_max) << ','
           << format_double(r.fill) << ',' << format_double(r.sep) << ','
           << format_double(r.lambda_min_upper) << ',' << format_double(r.cond) << ','
           << r.restricted_size << '\n';
    }
}

RunTrace read_trace_csv(std::istream& is) {
    const CsvHead head = read_head(is);
    RunTrace trace;
    try {
        trace.kernel = head.meta.at("kernel");
        trace.gamma = parse_double(head.meta.at("gamma"));
        trace.rule = head.meta.at("rule");
        trace.seed = std::stoull(head.meta.at("seed"));
        trace.stop_reason = parse_stop_reason(head.meta.at("stop_reason"));
        trace.dim = std::stoul(head.meta.at("dim"));
    } catch (const std::out_of_range&) {
        throw Error(ErrorCode::Io, "trace CSV lacks metadata");
    }
    if (auto it = head.meta.find("target"); it != head.meta.end()) trace.target = it->second;
    const std::size_t expected = trace.dim + 9;
    if (head.header.size() != expected || head.header[0] != "n" ||
        head.header.back() != "restricted_size") {
        throw Error(ErrorCode::Io, "unexpected trace CSV columns");
    }
    std::vector<std::string> c;
    while (next_row(is, c)) {
        if (c.size() != expected) throw Error(ErrorCode::Io, "ragged trace row");
        TraceRow r;
        r.n = std::stoul(c[0]);
        r.chosen_index = std::stoul(c[1]);
        for (std::size_t k = 0; k < trace.dim; ++k) r.coords.push_back(parse_double(c[2 + k]));
        std::size_t at = 2 + trace.dim;
        r.p_max = parse_double(c[at++]);
        r.r_max = parse_double(c[at++]);
        r.fill = parse_double(c[at++]);
        r.sep = parse_double(c[at++]);
        r.lambda_min_upper = parse_double(c[at++]);
        r.cond = parse_double(c[at++]);
        r.restricted_size = std::stoul(c[at++]);
        r.lambda_min = kNaN;
        r.chosen_power = kNaN;
        r.p_max_before = kNaN;
        trace.rows.push_back(std::move(r));
    }
    return trace;
}

json trace_to_json(const RunTrace& trace) {
    json meta = json::object();
    for (const auto& [k, v] : trace_metadata(trace)) meta[k] = v;
    meta["gamma"] = trace.gamma;
    meta["seed"] = trace.seed;
    meta["dim"] = trace.dim;
    json rows = json::array();
    for (const auto& r : trace.rows) {
        rows.push_back({{"n", r.n},
                        {"chosen_index", r.chosen_index},
                        {"coords", r.coords},
                        {"p_max", json_number_or_null(r.p_max)},
                        {"r_max", json_number_or_null(r.r_max)},
                        {"fill", json_number_or_null(r.fill)},
                        {"sep", json_number_or_null(r.sep)},
                        {"lambda_min_upper", json_number_or_null(r.lambda_min_upper)},
                        {"cond", json_number_or_null(r.cond)},
                        {"lambda_min", json_number_or_null(r.lambda_min)},
                        {"restricted_size", r.restricted_size},
                        {"chosen_power", json_number_or_null(r.chosen_power)},
                        {"p_max_before", json_number_or_null(r.p_max_before)}});
    }
    return {{"metadata", std::move(meta)}, {"rows", std::move(rows)}};
}

RunTrace trace_from_json(const json& j) {
    try {
        const json& meta = j.at("metadata");
        RunTrace trace;
        trace.kernel = meta.at("kernel").get<std::string>();
        trace.gamma = meta.at("gamma").get<double>();
        trace.rule = meta.at("rule").get<std::string>();
        trace.seed = meta.at("seed").get<std::uint64_t>();
        trace.stop_reason = parse_stop_reason(meta.at("stop_reason").get<std::string>());
        trace.dim = meta.at("dim").get<std::size_t>();
        trace.target = meta.value("target", std::string{});
        for (const auto& row : j.at("rows")) {
            TraceRow r;
            r.n = row.at("n").get<std::size_t>();
            r.chosen_index = row.at("chosen_index").get<std::size_t>();
            r.coords = row.at("coords").get<std::vector<double>>();
            r.p_max = json_number(row.at("p_max"));
            r.r_max = json_number(row.at("r_max"));
            r.fill = json_number(row.at("fill"));
            r.sep = json_number(row.at("sep"));
            r.lambda_min_upper = json_number(row.at("lambda_min_upper"));
            r.cond = json_number(row.at("cond"));
            r.lambda_min = json_number(row.at("lambda_min"));
            r.restricted_size = row.at("restricted_size").get<std::size_t>();
            r.chosen_power = json_number(row.at("chosen_power"));
            r.p_max_before = json_number(row.at("p_max_before"));
            trace.rows.push_back(std::move(r));
        }
        return trace;
    } catch (const json::exception& e) {
        throw Error(ErrorCode::Io, std::string("malformed trace JSON: ") + e.what());
    }
}

// --- models ---------------------------------------------------------------------

Eigen::VectorXd SavedModel::evaluate(const PointCloud& points) const {
    if (!points.empty() && points.dim() != centers.dim()) {
        throw Error(ErrorCode::DimensionMismatch, "saved model dimension");
    }
    return kernel_matrix(kernel, points, centers) * coefficients;
}

double SavedModel::system_residual() const {
    if (centers.empty()) return 0.0;
    return (kernel_matrix(kernel, centers, centers) * coefficients - center_values).cwiseAbs().maxCoeff();
}

json model_to_json(const GreedyModel& model) {
    const Eigen::VectorXd diag = model.newton_factor().diagonal();
    json j = {{"kernel", model.kernel().descriptor()},
              {"dim", model.dim()},
              {"centers", points_to_json(model.centers())["points"]},
              {"center_indices", model.center_indices()},
              {"newton_diag", std::vector<double>(diag.data(), diag.data() + diag.size())}};
    if (model.has_target() && model.size() > 0) {
        const Eigen::VectorXd& a = model.coefficients();
        const Eigen::VectorXd b = model.center_values();
        j["coefficients"] = std::vector<double>(a.data(), a.data() + a.size());
        j["center_values"] = std::vector<double>(b.data(), b.data() + b.size());
    } else {
        j["coefficients"] = json::array();
        j["center_values"] = json::array();
    }
    return j;
}

SavedModel model_from_json(const json& j, bool validate) {
    SavedModel m;
    try {
        m.kernel = Kernel::parse(j.at("kernel").get<std::string>());
        const std::size_t dim = j.at("dim").get<std::size_t>();
        m.centers = points_from_json({{"dim", dim}, {"points", j.at("centers")}});
        auto vec = [&](const char* key) {
            const auto v = j.at(key).get<std::vector<double>>();
            return Eigen::VectorXd(Eigen::Map<const Eigen::VectorXd>(v.data(), static_cast<Eigen::Index>(v.size())));
        };
        m.coefficients = vec("coefficients");
        m.center_values = vec("center_values");
        m.newton_diag = vec("newton_diag");
    } catch (const json::exception& e) {
        throw Error(ErrorCode::Io, std::string("malformed model JSON: ") + e.what());
    }
    const auto n = static_cast<Eigen::Index>(m.centers.size());
    if (m.newton_diag.size() != n) throw Error(ErrorCode::ModelValidation, "newton_diag length");
    const bool has_coefficients = m.coefficients.size() > 0;
    if (has_coefficients && (m.coefficients.size() != n || m.center_values.size() != n)) {
        throw Error(ErrorCode::ModelValidation, "coefficient length differs from center count");
    }
    if ((m.newton_diag.array() <= 0.0).any()) {
        throw Error(ErrorCode::ModelValidation, "factor diagonal must be positive");
    }
    if (validate && has_coefficients) {
        const double scale = std::max(1.0, m.center_values.cwiseAbs().maxCoeff());
        const double res = m.system_residual();
        if (!(res <= 1e-8 * scale)) {
            throw Error(ErrorCode::ModelValidation,
                        "|A alpha - b| = " + format_double(res) + " exceeds 1e-8 * " + format_double(scale));
        }
    }
    return m;
}

// --- rate fits ------------------------------------------------------------------

json rate_to_json(const RateFit& fit, const std::optional<SandwichVerdict>& verdict) {
    json windows = json::array(), slopes = json::array(), intercepts = json::array();
    for (std::size_t k = 0; k < fit.fits.size(); ++k) {
        windows.push_back({fit.windows[k].first, fit.windows[k].last});
        slopes.push_back(fit.fits[k].slope);
        intercepts.push_back(fit.fits[k].intercept);
    }
    json j = {{"windows", std::move(windows)},
              {"slopes", std::move(slopes)},
              {"intercepts", std::move(intercepts)},
              {"mean", fit.mean_slope},
              {"std", fit.std_slope},
              {"theory", nullptr},
              {"verdict", nullptr}};
    if (verdict) {
        j["theory"] = verdict->theory;
        j["verdict"] = verdict->pass ? "pass" : "fail";
        j["tolerance"] = verdict->tolerance;
    }
    return j;
}

RateFit rate_from_json(const json& j) {
    try {
        RateFit fit;
        const auto& slopes = j.at("slopes");
        const auto& intercepts = j.at("intercepts");
        const auto& windows = j.at("windows");
        for (std::size_t k = 0; k < slopes.size(); ++k) {
            fit.windows.push_back({windows[k][0].get<std::size_t>(), windows[k][1].get<std::size_t>()});
            fit.fits.push_back({intercepts[k].get<double>(), slopes[k].get<double>()});
        }
        fit.mean_slope = j.at("mean").get<double>();
        fit.std_slope = j.at("std").get<double>();
        return fit;
    } catch (const json::exception& e) {
        throw Error(ErrorCode::Io, std::string("malformed rate JSON: ") + e.what());
    }
}

json read_json(const std::filesystem::path& path) {
    std::ifstream is(path);
    if (!is) throw Error(ErrorCode::Io, "cannot open " + path.string());
    try {
        return json::parse(is);
    } catch (const json::exception& e) {
        throw Error(ErrorCode::Io, path.string() + ": " + e.what());
    }
}

void write_json(const std::filesystem::path& path, const json& j) { write_text(path, j.dump(1) + "\n"); }

void write_text(const std::filesystem::path& path, const std::string& body) {
    if (path.has_parent_path()) {
        std::error_code ec;
        std::filesystem::create_directories(path.parent_path(), ec);
        if (ec) throw Error(ErrorCode::Io, "cannot create " + path.parent_path().string());
    }
    std::ofstream os(path, std::ios::binary);
    if (!os) throw Error(ErrorCode::Io, "cannot write " + path.string());
    os << body;
    if (!os) throw Error(ErrorCode::Io, "write failed for " + path.string());
}

}  // namespace stabgreedy::io
