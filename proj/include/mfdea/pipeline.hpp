#ifndef MFDEA_PIPELINE_HPP
#define MFDEA_PIPELINE_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "mfdea/common.hpp"
#include "mfdea/histogram.hpp"
#include "mfdea/levy.hpp"
#include "mfdea/spectrum.hpp"
#include "mfdea/time_series.hpp"

namespace mfdea {

enum class Transform { none, log_returns };
enum class OutputFormat { json, csv };

// Synthetic inputs for validation runs.
struct GeneratorSpec {
    enum class Kind { none, gaussian_walk, levy_walk, multiscale };

    Kind kind = Kind::none;
    std::size_t n = 0;          // gaussian-walk / levy-walk length
    double mu = 2.0;            // levy-walk stability index
    double levy_scale = 1.0;    // levy-walk scale parameter
    std::string profile;        // multiscale profile, "scale:mu,..."
    std::int64_t window = 0;    // multiscale window scale
    std::int64_t horizon = 0;   // multiscale horizon (multiple of window)
};

struct RunConfig {
    std::string input_path;
    std::string column = "0";  // index or header name
    Transform transform = Transform::none;
    GeneratorSpec generator;

    BinWidthRule rule = BinWidthRule::scott();
    double q_min = 0.0;
    double q_max = 10.0;
    double q_step = 0.1;
    std::vector<std::int64_t> scales;  // empty = geometric default
    bool compat_r = false;
    std::uint64_t seed = 12345;
    OutputFormat format = OutputFormat::json;
    std::string output_path;  // empty = stdout
    bool emit_surface = false;
    bool allow_negative_q = false;

    void validate() const;  // throws config_error
};

struct QRecord {
    double q;
    double h_star;
    double delta;
    double std_error;
    double ci99_low;
    double ci99_high;
    double r2;
    double tau;
    double alpha;
    double f_alpha;
    double d_q;
    std::vector<std::string> warnings;
};

struct SurfaceCell {
    double q;
    std::int64_t scale;
    double entropy;
};

struct Report {
    std::vector<QRecord> records;
    std::vector<SurfaceCell> surface;  // filled when emit_surface is set
};

// Parse one numeric column from a delimited text file (comma, tab or
// whitespace, auto-detected); a non-numeric first row is treated as a header.
TimeSeries ingest(const std::string& path, const std::string& column,
                  Transform transform);

TimeSeries synthesize(const GeneratorSpec& spec, std::uint64_t seed);

// Full pipeline: input -> fluctuation collection -> entropy surface ->
// delta regression -> Legendre spectrum.
Report run(const RunConfig& config);

std::string to_json(const Report& report, bool include_surface);
std::string to_csv(const Report& report, bool include_surface);

// Serialize per `format` and write to `output_path` (stdout when empty).
void write_report(const Report& report, const RunConfig& config);

}  // namespace mfdea

#endif
