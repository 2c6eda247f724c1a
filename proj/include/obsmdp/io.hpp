#pragma once

#include <charconv>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iterator>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <system_error>
#include <vector>

#include <json.hpp>

#include "obsmdp/simulate.hpp"
#include "obsmdp/value_table.hpp"

namespace obsmdp::io {

class IoError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

// Shortest round-trip decimal form; every emitted float parses back to the
// identical bit pattern.
inline std::string format_double(double v) {
    char buf[32];
    const auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

inline double parse_double(std::string_view s, const std::string& what) {
    double out = 0.0;
    const auto res = std::from_chars(s.data(), s.data() + s.size(), out);
    if (res.ec != std::errc{} || res.ptr != s.data() + s.size())
        throw IoError(what + ": cannot parse \"" + std::string(s) + "\" as a float");
    return out;
}

inline std::int64_t parse_int(std::string_view s, const std::string& what) {
    std::int64_t out = 0;
    const auto res = std::from_chars(s.data(), s.data() + s.size(), out);
    if (res.ec != std::errc{} || res.ptr != s.data() + s.size())
        throw IoError(what + ": cannot parse \"" + std::string(s) + "\" as an integer");
    return out;
}

inline std::string read_text(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open " + path.string());
    std::string out((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    return out;
}

// Write via a temp file in the same directory, then rename over the target,
// so readers never observe a half-written file.
inline void atomic_write_text(const std::filesystem::path& path, const std::string& content) {
    const std::filesystem::path tmp = path.string() + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw IoError("cannot create " + tmp.string());
        out.write(content.data(), static_cast<std::streamsize>(content.size()));
        out.flush();
        if (!out) throw IoError("short write to " + tmp.string());
    }
    std::error_code ec;
    std::filesystem::rename(tmp, path, ec);
    if (ec) throw IoError("cannot rename " + tmp.string() + " -> " + path.string() + ": " +
                          ec.message());
}

inline std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> out;
    std::size_t start = 0;
    while (true) {
        const std::size_t comma = line.find(',', start);
        if (comma == std::string::npos) {
            out.push_back(line.substr(start));
            return out;
        }
        out.push_back(line.substr(start, comma - start));
        start = comma + 1;
    }
}

inline std::vector<std::vector<std::string>> read_csv(const std::filesystem::path& path,
                                                      const std::string& expect_header) {
    std::istringstream in(read_text(path));
    std::string line;
    if (!std::getline(in, line) || line != expect_header)
        throw IoError(path.string() + ": expected header \"" + expect_header + "\"");
    std::vector<std::vector<std::string>> rows;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        rows.push_back(split_csv_line(line));
    }
    return rows;
}

// ---- value_table.json ------------------------------------------------------

inline void write_value_table_json(const std::filesystem::path& path, const std::string& model,
                                   const ValueTable& v) {
    nlohmann::json j;
    j["model"] = model;
    j["window"] = {v.window.lo, v.window.hi};
    j["iteration_count"] = v.iteration_count;
    j["values"] = v.values;
    atomic_write_text(path, j.dump(2) + "\n");
}

inline ValueTable read_value_table_json(const std::filesystem::path& path,
                                        std::string* model = nullptr) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(read_text(path));
    } catch (const nlohmann::json::exception& e) {
        throw IoError(path.string() + ": " + e.what());
    }
    try {
        ValueTable v;
        v.window = Window{j.at("window").at(0).get<std::int64_t>(),
                          j.at("window").at(1).get<std::int64_t>()};
        v.iteration_count = j.at("iteration_count").get<int>();
        v.values = j.at("values").get<std::vector<double>>();
        if (model) *model = j.at("model").get<std::string>();
        if (v.values.size() != v.window.size())
            throw IoError(path.string() + ": values length does not match window");
        return v;
    } catch (const nlohmann::json::exception& e) {
        throw IoError(path.string() + ": " + e.what());
    }
}

// ---- policy.csv ------------------------------------------------------------

inline constexpr const char* policy_header = "x,v_star,a_star,T_star";

inline void write_policy_csv(const std::filesystem::path& path, const StagePolicy& pol,
                             const ValueTable& v) {
    if (pol.window != v.window)
        throw std::invalid_argument("write_policy_csv: window mismatch");
    std::string out = std::string(policy_header) + "\n";
    for (std::size_t i = 0; i < pol.entries.size(); ++i) {
        const PolicyEntry& e = pol.entries[i];
        out += std::to_string(e.x) + "," + format_double(v.values[i]) + "," +
               format_double(e.a) + "," + format_double(e.T) + "\n";
    }
    atomic_write_text(path, out);
}

struct PolicyFile {
    StagePolicy policy;
    std::vector<double> v_star;
};

inline PolicyFile read_policy_csv(const std::filesystem::path& path) {
    const auto rows = read_csv(path, policy_header);
    if (rows.empty()) throw IoError(path.string() + ": no policy rows");
    PolicyFile out;
    for (const auto& r : rows) {
        if (r.size() != 4) throw IoError(path.string() + ": expected 4 columns");
        const std::int64_t x = parse_int(r[0], path.string());
        const double vs = parse_double(r[1], path.string());
        const double a = parse_double(r[2], path.string());
        const double T = parse_double(r[3], path.string());
        out.policy.entries.push_back(PolicyEntry{x, a, T, vs});
        out.v_star.push_back(vs);
    }
    out.policy.window = Window{out.policy.entries.front().x, out.policy.entries.back().x};
    for (std::size_t i = 0; i < out.policy.entries.size(); ++i)
        if (out.policy.entries[i].x != out.policy.window.state(i))
            throw IoError(path.string() + ": states must be contiguous and ascending");
    return out;
}

// ---- residuals.csv ---------------------------------------------------------

inline constexpr const char* residuals_header = "iteration,sup_norm_residual";

inline void write_residuals_csv(const std::filesystem::path& path,
                                const std::vector<double>& residuals) {
    std::string out = std::string(residuals_header) + "\n";
    for (std::size_t i = 0; i < residuals.size(); ++i)
        out += std::to_string(i + 1) + "," + format_double(residuals[i]) + "\n";
    atomic_write_text(path, out);
}

inline std::vector<double> read_residuals_csv(const std::filesystem::path& path) {
    const auto rows = read_csv(path, residuals_header);
    std::vector<double> out;
    for (const auto& r : rows) {
        if (r.size() != 2) throw IoError(path.string() + ": expected 2 columns");
        if (parse_int(r[0], path.string()) != static_cast<std::int64_t>(out.size() + 1))
            throw IoError(path.string() + ": iteration numbers must count from 1");
        out.push_back(parse_double(r[1], path.string()));
    }
    return out;
}

// ---- trace.csv -------------------------------------------------------------

inline constexpr const char* trace_header = "time,kind,state,action,interval";

inline const char* event_kind_name(EventKind k) {
    switch (k) {
        case EventKind::arrival: return "arrival";
        case EventKind::departure: return "departure";
        case EventKind::observation: return "observation";
    }
    return "?";
}

// One row per event; action/interval are filled only on observation rows.
inline void write_trace_csv(const std::filesystem::path& path, const SimTrace& tr) {
    std::string out = std::string(trace_header) + "\n";
    std::size_t obs = 0;
    for (const SimEvent& e : tr.events) {
        out += format_double(e.time);
        out += ",";
        out += event_kind_name(e.kind);
        out += "," + std::to_string(e.state) + ",";
        if (e.kind == EventKind::observation) {
            out += format_double(tr.observations[obs].a) + "," +
                   format_double(tr.observations[obs].T);
            ++obs;
        } else {
            out += ",";
        }
        out += "\n";
    }
    atomic_write_text(path, out);
}

struct TraceRow {
    double time = 0.0;
    std::string kind;
    std::int64_t state = 0;
    bool has_action = false;
    double action = 0.0;
    double interval = 0.0;
};

inline std::vector<TraceRow> read_trace_csv(const std::filesystem::path& path) {
    const auto rows = read_csv(path, trace_header);
    std::vector<TraceRow> out;
    for (const auto& r : rows) {
        if (r.size() != 5) throw IoError(path.string() + ": expected 5 columns");
        TraceRow row;
        row.time = parse_double(r[0], path.string());
        row.kind = r[1];
        row.state = parse_int(r[2], path.string());
        row.has_action = !r[3].empty();
        if (row.has_action) {
            row.action = parse_double(r[3], path.string());
            row.interval = parse_double(r[4], path.string());
        } else if (!r[4].empty()) {
            throw IoError(path.string() + ": interval without action");
        }
        out.push_back(row);
    }
    return out;
}

// ---- estimate.json ---------------------------------------------------------

struct EstimateFile {
    RolloutEstimate est;
    std::int64_t x0 = 0;
    std::uint64_t seed = 0;
};

inline void write_estimate_json(const std::filesystem::path& path, const EstimateFile& e) {
    nlohmann::json j;
    j["mean"] = e.est.mean;
    j["std_error"] = e.est.std_error;
    j["n_rollouts"] = e.est.n_rollouts;
    j["horizon"] = e.est.horizon;
    j["truncation_bound"] = e.est.truncation_bound;
    j["x0"] = e.x0;
    j["seed"] = e.seed;
    atomic_write_text(path, j.dump(2) + "\n");
}

inline EstimateFile read_estimate_json(const std::filesystem::path& path) {
    try {
        const nlohmann::json j = nlohmann::json::parse(read_text(path));
        EstimateFile e;
        e.est.mean = j.at("mean").get<double>();
        e.est.std_error = j.at("std_error").get<double>();
        e.est.n_rollouts = j.at("n_rollouts").get<std::int64_t>();
        e.est.horizon = j.at("horizon").get<double>();
        e.est.truncation_bound = j.at("truncation_bound").get<double>();
        e.x0 = j.at("x0").get<std::int64_t>();
        e.seed = j.at("seed").get<std::uint64_t>();
        return e;
    } catch (const nlohmann::json::exception& e) {
        throw IoError(path.string() + ": " + e.what());
    }
}

// ---- sweep.csv -------------------------------------------------------------

// anchor = theta for the inventory model, 0 for the queue; failed points
// carry nan stats.
inline constexpr const char* sweep_header = "value,v_star,t_star,a_star_min,a_star_max";

struct SweepRow {
    double value = 0.0;
    double v_star = 0.0;
    double t_star = 0.0;
    double a_star_min = 0.0;
    double a_star_max = 0.0;
};

inline void write_sweep_csv(const std::filesystem::path& path,
                            const std::vector<SweepRow>& rows) {
    std::string out = std::string(sweep_header) + "\n";
    for (const SweepRow& r : rows)
        out += format_double(r.value) + "," + format_double(r.v_star) + "," +
               format_double(r.t_star) + "," + format_double(r.a_star_min) + "," +
               format_double(r.a_star_max) + "\n";
    atomic_write_text(path, out);
}

inline std::vector<SweepRow> read_sweep_csv(const std::filesystem::path& path) {
    const auto rows = read_csv(path, sweep_header);
    std::vector<SweepRow> out;
    for (const auto& r : rows) {
        if (r.size() != 5) throw IoError(path.string() + ": expected 5 columns");
        out.push_back(SweepRow{parse_double(r[0], path.string()),
                               parse_double(r[1], path.string()),
                               parse_double(r[2], path.string()),
                               parse_double(r[3], path.string()),
                               parse_double(r[4], path.string())});
    }
    return out;
}

}  // namespace obsmdp::io
