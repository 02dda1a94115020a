#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>
#include <nlohmann/json.hpp>

#include "stabgreedy/analysis.hpp"
#include "stabgreedy/geometry.hpp"
#include "stabgreedy/greedy.hpp"
#include "stabgreedy/interpolant.hpp"
#include "stabgreedy/kernels.hpp"

namespace stabgreedy::io {

using json = nlohmann::json;

/// Key/value pairs emitted as leading "# key: value" comment lines in CSV
/// files and as a "metadata" object in JSON files.
using Metadata = std::vector<std::pair<std::string, std::string>>;

/// Shortest representation that parses back to the same double; "nan",
/// "inf", "-inf" for non-finite values.
std::string format_double(double v);
double parse_double(const std::string& text);

// --- point clouds: CSV header x0,...,x{d-1}[,label]; JSON {"dim", "points"} ---

void write_points_csv(std::ostream& os, const PointCloud& points, const Metadata& meta = {});
PointCloud read_points_csv(std::istream& is);
json points_to_json(const PointCloud& points);
PointCloud points_from_json(const json& j);

/// Dispatches on the extension (.csv or .json).
void save_points(const std::filesystem::path& path, const PointCloud& points, const Metadata& meta = {});
PointCloud load_points(const std::filesystem::path& path);

/// Single-column CSV with header "f", one value per candidate.
std::vector<double> read_values_csv(std::istream& is);
std::vector<double> load_values(const std::filesystem::path& path);

// --- run traces ---------------------------------------------------------------

/// Columns: n, chosen_index, x0..x{d-1}, p_max, r_max, fill, sep,
/// lambda_min_upper, cond, restricted_size.
void write_trace_csv(std::ostream& os, const RunTrace& trace, const Metadata& extra = {});
RunTrace read_trace_csv(std::istream& is);
json trace_to_json(const RunTrace& trace);
RunTrace trace_from_json(const json& j);

// --- models -------------------------------------------------------------------

/// Interpolant restored from JSON: enough to evaluate, not to continue the
/// greedy iteration.
struct SavedModel {
    Kernel kernel{KernelFamily::LinearMatern};
    PointCloud centers;
    Eigen::VectorXd coefficients;
    Eigen::VectorXd newton_diag;
    Eigen::VectorXd center_values;

    Eigen::VectorXd evaluate(const PointCloud& points) const;
    /// max |A alpha - b|
    double system_residual() const;
};

json model_to_json(const GreedyModel& model);
/// Rejects models whose |A alpha - b|_inf exceeds 1e-8 * max(1, |b|_inf).
SavedModel model_from_json(const json& j, bool validate = true);

// --- rate fits ----------------------------------------------------------------

json rate_to_json(const RateFit& fit, const std::optional<SandwichVerdict>& verdict = std::nullopt);
RateFit rate_from_json(const json& j);

json read_json(const std::filesystem::path& path);
void write_json(const std::filesystem::path& path, const json& j);
void write_text(const std::filesystem::path& path, const std::string& body);

}  // namespace stabgreedy::io
