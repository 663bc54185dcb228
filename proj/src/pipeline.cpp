#include "mfdea/pipeline.hpp"

#include <cctype>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

#include <json.hpp>

#include "mfdea/numerics.hpp"

namespace mfdea {

void RunConfig::validate() const {
    if (!(q_step > 0.0)) throw config_error("q-step must be positive");
    if (q_min > q_max) throw config_error("q-min must not exceed q-max");
    if (q_min < 0.0 && !allow_negative_q) {
        throw config_error("negative q values require --allow-negative-q");
    }
    // Three grid points are the minimum for the Legendre differentiation.
    const std::size_t grid_points =
        static_cast<std::size_t>(std::floor((q_max - q_min) / q_step + 0.5)) + 1;
    if (grid_points < 3) {
        throw config_error("q grid needs at least 3 points for the spectrum");
    }
    if (rule.kind == BinWidthRule::Kind::fixed && !(rule.fixed_h > 0.0)) {
        throw config_error("fixed bin width must be positive");
    }
    const bool has_input = !input_path.empty();
    const bool has_generator = generator.kind != GeneratorSpec::Kind::none;
    if (has_input == has_generator) {
        throw config_error("exactly one of input path or generator is required");
    }
    if (!scales.empty()) {
        (void)ScaleSet{scales};  // strictly increasing, all >= 2
    }
}

namespace {

bool parse_double(const std::string& token, double& out) {
    if (token.empty()) return false;
    std::size_t pos = 0;
    try {
        out = std::stod(token, &pos);
    } catch (const std::exception&) {
        return false;
    }
    return pos == token.size() && std::isfinite(out);
}

std::vector<std::string> split_line(const std::string& line, char delim) {
    std::vector<std::string> tokens;
    if (delim == ' ') {
        std::stringstream ss(line);
        std::string tok;
        while (ss >> tok) tokens.push_back(tok);
        return tokens;
    }
    std::stringstream ss(line);
    std::string tok;
    while (std::getline(ss, tok, delim)) tokens.push_back(tok);
    return tokens;
}

}  // namespace

TimeSeries ingest(const std::string& path, const std::string& column,
                  Transform transform) {
    std::ifstream in(path);
    if (!in) throw data_error("cannot open input file '" + path + "'");

    std::vector<std::string> lines;
    std::vector<std::size_t> line_numbers;
    std::string raw;
    std::size_t lineno = 0;
    while (std::getline(in, raw)) {
        ++lineno;
        if (!raw.empty() && raw.back() == '\r') raw.pop_back();
        if (raw.find_first_not_of(" \t") == std::string::npos) continue;
        lines.push_back(raw);
        line_numbers.push_back(lineno);
    }
    if (lines.empty()) throw data_error("input file '" + path + "' is empty");

    const char delim = lines.front().find(',') != std::string::npos ? ','
                       : lines.front().find('\t') != std::string::npos ? '\t'
                                                                       : ' ';

    // Resolve the column: an integer selects by index; anything else must
    // match a header cell in the first row.
    std::size_t col = 0;
    std::size_t first_data_row = 0;
    bool by_index = !column.empty() &&
                    column.find_first_not_of("0123456789") == std::string::npos;
    const auto header = split_line(lines.front(), delim);
    if (by_index) {
        col = static_cast<std::size_t>(std::stoull(column));
        double ignored;
        if (col < header.size() && !parse_double(header[col], ignored) &&
            lines.size() > 1) {
            first_data_row = 1;  // header auto-skip
        }
    } else {
        bool found = false;
        for (std::size_t i = 0; i < header.size(); ++i) {
            if (header[i] == column) {
                col = i;
                found = true;
                break;
            }
        }
        if (!found) {
            throw data_error("column '" + column + "' not found in header of '" +
                             path + "'");
        }
        first_data_row = 1;
    }

    std::vector<double> values;
    values.reserve(lines.size());
    std::vector<std::size_t> bad_lines;
    for (std::size_t r = first_data_row; r < lines.size(); ++r) {
        const auto tokens = split_line(lines[r], delim);
        double v = 0.0;
        if (col >= tokens.size() || !parse_double(tokens[col], v)) {
            bad_lines.push_back(line_numbers[r]);
            continue;
        }
        values.push_back(v);
    }
    if (!bad_lines.empty()) {
        std::string msg = "unparseable rows in '" + path + "' at lines:";
        for (std::size_t i = 0; i < bad_lines.size() && i < 20; ++i) {
            msg += ' ' + std::to_string(bad_lines[i]);
        }
        if (bad_lines.size() > 20) msg += " ...";
        throw data_error(msg);
    }
    if (values.empty()) throw data_error("no numeric data in '" + path + "'");

    TimeSeries series(std::move(values));
    if (transform == Transform::log_returns) return log_returns(series);
    return series;
}

TimeSeries synthesize(const GeneratorSpec& spec, std::uint64_t seed) {
    switch (spec.kind) {
        case GeneratorSpec::Kind::gaussian_walk: {
            if (spec.n == 0) throw config_error("generator length must be positive");
            num::Rng rng(seed);
            std::vector<double> values(spec.n);
            for (double& v : values) v = rng.normal();
            return TimeSeries(std::move(values));
        }
        case GeneratorSpec::Kind::levy_walk: {
            if (spec.n == 0) throw config_error("generator length must be positive");
            return TimeSeries(
                stable_sample({spec.mu, spec.levy_scale}, spec.n, seed));
        }
        case GeneratorSpec::Kind::multiscale: {
            return generate_multiscale(MuProfile::parse(spec.profile),
                                       spec.window, spec.horizon, seed);
        }
        case GeneratorSpec::Kind::none:
            break;
    }
    throw config_error("no generator selected");
}

Report run(const RunConfig& config) {
    config.validate();

    const TimeSeries series = config.generator.kind != GeneratorSpec::Kind::none
                                  ? synthesize(config.generator, config.seed)
                                  : ingest(config.input_path, config.column,
                                           config.transform);
    if (series.size() < kMinSeriesLength) {
        throw data_error("not enough data: need at least " +
                         std::to_string(kMinSeriesLength) + " points, got " +
                         std::to_string(series.size()));
    }

    ScaleSet scales = config.scales.empty() ? default_scales(series.size())
                                            : ScaleSet(config.scales);
    scales.validate_for(series.size());

    const Convention convention =
        config.compat_r ? Convention::compat_r : Convention::paper;
    const FluctuationEnsemble ensemble =
        collect_fluctuations(series, scales, convention);
    const QGrid q_grid = QGrid::linspace(config.q_min, config.q_max,
                                         config.q_step, config.allow_negative_q);
    const EntropySurface surface =
        entropy_surface(ensemble, q_grid, config.rule, convention);
    const SpectrumResult fits = fit_delta(surface);
    const std::vector<LegendrePoint> legendre = legendre_spectrum(fits, q_grid);

    Report report;
    report.records.reserve(q_grid.size());
    for (std::size_t qi = 0; qi < q_grid.size(); ++qi) {
        const SpectrumPoint& pt = fits.points[qi];
        QRecord rec{pt.q,
                    surface.bin_width[qi],
                    pt.delta,
                    pt.std_error,
                    pt.ci_low,
                    pt.ci_high,
                    pt.r_squared,
                    legendre[qi].tau,
                    legendre[qi].alpha,
                    legendre[qi].f_alpha,
                    legendre[qi].d_q,
                    {}};
        if (surface.rho_clamped[qi]) rec.warnings.push_back("rho-clamped");
        if (!pt.valid) rec.warnings.push_back("insufficient-scales");
        for (std::size_t si = 0; si < surface.scales.size(); ++si) {
            if (std::isinf(surface.entropies[qi][si])) {
                rec.warnings.push_back("infinite-entropy");
                break;
            }
        }
        report.records.push_back(std::move(rec));
    }
    if (config.emit_surface) {
        for (std::size_t qi = 0; qi < q_grid.size(); ++qi) {
            for (std::size_t si = 0; si < surface.scales.size(); ++si) {
                report.surface.push_back({q_grid.values()[qi],
                                          surface.scales[si],
                                          surface.entropies[qi][si]});
            }
        }
    }
    return report;
}

namespace {

std::string format_double(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

}  // namespace

std::string to_json(const Report& report, bool include_surface) {
    nlohmann::ordered_json records = nlohmann::ordered_json::array();
    for (const auto& r : report.records) {
        nlohmann::ordered_json rec;
        rec["q"] = r.q;
        rec["h_star"] = r.h_star;
        rec["delta"] = r.delta;
        rec["stderr"] = r.std_error;
        rec["ci99_low"] = r.ci99_low;
        rec["ci99_high"] = r.ci99_high;
        rec["r2"] = r.r2;
        rec["tau"] = r.tau;
        rec["alpha"] = r.alpha;
        rec["f_alpha"] = r.f_alpha;
        rec["d_q"] = r.d_q;
        rec["warnings"] = r.warnings;
        records.push_back(std::move(rec));
    }
    if (!include_surface) return records.dump(2) + "\n";
    nlohmann::ordered_json root;
    root["records"] = std::move(records);
    nlohmann::ordered_json surface = nlohmann::ordered_json::array();
    for (const auto& cell : report.surface) {
        surface.push_back({{"q", cell.q},
                           {"scale", cell.scale},
                           {"entropy", cell.entropy}});
    }
    root["surface"] = std::move(surface);
    return root.dump(2) + "\n";
}

std::string to_csv(const Report& report, bool include_surface) {
    std::string out =
        "q,h_star,delta,stderr,ci99_low,ci99_high,r2,tau,alpha,f_alpha,d_q,"
        "warnings\n";
    for (const auto& r : report.records) {
        out += format_double(r.q) + ',' + format_double(r.h_star) + ',' +
               format_double(r.delta) + ',' + format_double(r.std_error) + ',' +
               format_double(r.ci99_low) + ',' + format_double(r.ci99_high) +
               ',' + format_double(r.r2) + ',' + format_double(r.tau) + ',' +
               format_double(r.alpha) + ',' + format_double(r.f_alpha) + ',' +
               format_double(r.d_q) + ',';
        for (std::size_t i = 0; i < r.warnings.size(); ++i) {
            if (i) out += ';';
            out += r.warnings[i];
        }
        out += '\n';
    }
    if (include_surface) {
        out += "\n# surface\nq,scale,entropy\n";
        for (const auto& cell : report.surface) {
            out += format_double(cell.q) + ',' + std::to_string(cell.scale) +
                   ',' + format_double(cell.entropy) + '\n';
        }
    }
    return out;
}

void write_report(const Report& report, const RunConfig& config) {
    const std::string text = config.format == OutputFormat::json
                                 ? to_json(report, config.emit_surface)
                                 : to_csv(report, config.emit_surface);
    if (config.output_path.empty()) {
        std::cout << text;
        return;
    }
    std::ofstream out(config.output_path);
    if (!out) {
        throw data_error("cannot open output file '" + config.output_path + "'");
    }
    out << text;
}

}  // namespace mfdea
