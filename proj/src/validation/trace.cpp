#include "hydrosurr/validation/trace.hpp"

#include <cmath>
#include <fstream>
#include <iomanip>
#include <sstream>

#include "hydrosurr/core/error.hpp"

namespace hydrosurr::validation {

std::string_view to_string(Direction d) { return d == Direction::ramp_in ? "ramp-in" : "ramp-out"; }

Direction parse_direction(std::string_view s) {
    if (s == "ramp-in") return Direction::ramp_in;
    if (s == "ramp-out") return Direction::ramp_out;
    throw DataError("unknown trial direction '" + std::string(s) + "'");
}

void TrialTrace::validate() const {
    if (position.size() != t.size() || orientation.size() != t.size())
        throw DataError("trace " + id + ": column lengths differ");
    for (std::size_t i = 1; i < t.size(); ++i)
        if (!(t[i] > t[i - 1]))
            throw DataError("trace " + id + ": timestamps not strictly increasing at row " + std::to_string(i));
    for (std::size_t i = 0; i < orientation.size(); ++i)
        if (std::abs(orientation[i].norm() - 1.0) > 1e-6)
            throw DataError("trace " + id + ": quaternion at row " + std::to_string(i) + " is not unit norm");
}

void align_hemispheres(std::vector<Quat>& q) {
    for (std::size_t i = 1; i < q.size(); ++i)
        if (dot(q[i - 1], q[i]) < 0.0) q[i] = {-q[i].w, -q[i].x, -q[i].y, -q[i].z};
}

TrialTrace resample_uniform(const TrialTrace& trace, double rate) {
    trace.validate();
    const std::size_t n = trace.size();
    if (n < 2) throw DataError("trace " + trace.id + ": resampling needs at least 2 samples");
    if (!(rate > 0.0)) throw ConfigError("resample rate must be positive");
    const double span = trace.t.back() - trace.t.front();
    const double mean_period = span / static_cast<double>(n - 1);
    if (1.0 / mean_period < rate * (1.0 - 1e-9))
        throw DataError("trace " + trace.id + ": input rate " + std::to_string(1.0 / mean_period) +
                        " Hz is below the target rate");

    std::ostringstream gaps;
    for (std::size_t i = 1; i < n; ++i)
        if (trace.t[i] - trace.t[i - 1] > 5.0 * mean_period)
            gaps << " [" << trace.t[i - 1] << ", " << trace.t[i] << "]";
    if (!gaps.str().empty()) throw DataError("trace " + trace.id + ": gaps exceed 5 input periods:" + gaps.str());

    TrialTrace out = trace;
    out.t.clear();
    out.position.clear();
    out.orientation.clear();
    const double t0 = trace.t.front();
    const auto m = static_cast<std::size_t>(std::floor(span * rate + 1e-9)) + 1;
    out.t.reserve(m);
    out.position.reserve(m);
    out.orientation.reserve(m);
    std::size_t seg = 0;
    for (std::size_t k = 0; k < m; ++k) {
        const double tk = t0 + static_cast<double>(k) / rate;
        while (seg + 2 < n && trace.t[seg + 1] <= tk) ++seg;
        const double a = trace.t[seg], b = trace.t[seg + 1];
        const double u = std::min(1.0, std::max(0.0, (tk - a) / (b - a)));
        out.t.push_back(tk);
        // Grid points that coincide with input samples copy them, so same-rate resampling is idempotent.
        if (u < 1e-9) {
            out.position.push_back(trace.position[seg]);
            out.orientation.push_back(trace.orientation[seg]);
        } else if (u > 1.0 - 1e-9) {
            out.position.push_back(trace.position[seg + 1]);
            out.orientation.push_back(trace.orientation[seg + 1]);
        } else {
            out.position.push_back(trace.position[seg] * (1.0 - u) + trace.position[seg + 1] * u);
            out.orientation.push_back(slerp(trace.orientation[seg], trace.orientation[seg + 1], u));
        }
    }
    align_hemispheres(out.orientation);
    return out;
}

void write_trace_csv(const std::filesystem::path& path, const TrialTrace& trace) {
    std::ofstream f(path);
    if (!f) throw IoError("cannot write " + path.string());
    f << std::setprecision(17);
    f << "# hydrosurr-trace v1 id=" << trace.id << " depth=" << trace.depth << " direction=" << to_string(trace.direction)
      << " command_speed=" << trace.command_speed << " floor_z=" << trace.floor_z << "\n";
    f << "t,x,y,z,qw,qx,qy,qz\n";
    for (std::size_t i = 0; i < trace.size(); ++i) {
        const auto& p = trace.position[i];
        const auto& q = trace.orientation[i];
        f << trace.t[i] << ',' << p.x << ',' << p.y << ',' << p.z << ',' << q.w << ',' << q.x << ',' << q.y << ','
          << q.z << '\n';
    }
    if (!f) throw IoError("write failed: " + path.string());
}

TrialTrace read_trace_csv(const std::filesystem::path& path) {
    std::ifstream f(path);
    if (!f) throw IoError("cannot read " + path.string());
    TrialTrace tr;
    std::string line;
    if (!std::getline(f, line) || line.rfind("# hydrosurr-trace v1", 0) != 0)
        throw DataError(path.string() + ": missing trace header");
    std::istringstream hs(line.substr(20));
    std::string kv;
    while (hs >> kv) {
        const auto eq = kv.find('=');
        if (eq == std::string::npos) continue;
        const std::string key = kv.substr(0, eq), val = kv.substr(eq + 1);
        try {
            if (key == "id") tr.id = val;
            else if (key == "depth") tr.depth = std::stod(val);
            else if (key == "direction") tr.direction = parse_direction(val);
            else if (key == "command_speed") tr.command_speed = std::stod(val);
            else if (key == "floor_z") tr.floor_z = std::stod(val);
        } catch (const std::logic_error&) {
            throw DataError(path.string() + ": bad header value for " + key);
        }
    }
    if (!std::getline(f, line) || line != "t,x,y,z,qw,qx,qy,qz")
        throw DataError(path.string() + ": unexpected column header");
    std::size_t row = 0;
    while (std::getline(f, line)) {
        ++row;
        if (line.empty()) continue;
        double v[8];
        std::istringstream ls(line);
        std::string cell;
        for (int c = 0; c < 8; ++c) {
            if (!std::getline(ls, cell, ',')) throw DataError(path.string() + ": short row " + std::to_string(row));
            try {
                v[c] = std::stod(cell);
            } catch (const std::logic_error&) {
                throw DataError(path.string() + ": bad number in row " + std::to_string(row));
            }
        }
        tr.t.push_back(v[0]);
        tr.position.push_back({v[1], v[2], v[3]});
        tr.orientation.push_back({v[4], v[5], v[6], v[7]});
    }
    tr.validate();
    return tr;
}

}  // namespace hydrosurr::validation
