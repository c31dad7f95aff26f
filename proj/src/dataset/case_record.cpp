#include "hydrosurr/dataset/case_record.hpp"

#include <cmath>
#include <fstream>
#include <iomanip>
#include <numbers>
#include <sstream>

#include "hydrosurr/core/error.hpp"
#include "hydrosurr/geometry/vehicle.hpp"

namespace hydrosurr::dataset {

namespace {

const Mat3& rotation() {
    static const Mat3 r = geometry::solver_to_body_rotation();
    return r;
}

double parse_double(const std::string& s, const std::string& where) {
    std::size_t used = 0;
    double v = 0.0;
    try {
        v = std::stod(s, &used);
    } catch (const std::exception&) {
        used = 0;
    }
    if (used != s.size()) throw DataError(where + ": malformed number '" + s + "'");
    return v;
}

std::vector<std::string> split(const std::string& line, char sep) {
    std::vector<std::string> out;
    std::string cell;
    std::istringstream in(line);
    while (std::getline(in, cell, sep)) out.push_back(cell);
    if (!line.empty() && line.back() == sep) out.emplace_back();
    return out;
}

}  // namespace

Vec3 solver_fluid_velocity(const CaseParams& p) {
    const double phi = p.phi_deg * std::numbers::pi / 180.0;
    return {p.U * std::cos(phi), 0.0, p.U * std::sin(phi)};
}

Vec3 vehicle_velocity(const CaseParams& p) { return -(rotation() * solver_fluid_velocity(p)); }

Vec3 solver_to_vehicle_force(const Vec3& f) { return rotation() * f; }
Vec3 vehicle_to_solver_force(const Vec3& f) { return rotation().transposed() * f; }

CaseRecord to_vehicle_frame(const CaseRecord& record) {
    if (record.frame != Frame::solver)
        throw DataError("case '" + record.case_id + "' is already in the vehicle frame");
    CaseRecord out = record;
    out.frame = Frame::vehicle;
    for (std::size_t k = 0; k < record.steps(); ++k)
        for (std::size_t s = 0; s < record.surfaces.size(); ++s)
            out.set_force(k, s, solver_to_vehicle_force(record.force(k, s)));
    return out;
}

void write_case_csv(const std::filesystem::path& path, const CaseRecord& r) {
    std::ofstream out(path);
    if (!out) throw IoError("cannot write " + path.string());
    out << std::setprecision(17);
    out << "# hydrosurr-case v1 case_id=" << r.case_id << " vehicle=" << r.vehicle << " U=" << r.params.U
        << " phi_deg=" << r.params.phi_deg << " rho=" << r.params.rho << " H=" << r.params.H
        << " frame=" << (r.frame == Frame::solver ? "solver" : "vehicle") << " dt=" << r.dt << '\n';
    out << 't';
    for (const auto& s : r.surfaces) out << ',' << s << ":Fx," << s << ":Fy," << s << ":Fz";
    out << '\n';
    const std::size_t width = r.surfaces.size() * 3;
    for (std::size_t k = 0; k < r.steps(); ++k) {
        out << r.t[k];
        for (std::size_t c = 0; c < width; ++c) out << ',' << r.forces[k * width + c];
        out << '\n';
    }
    if (!out) throw IoError("error writing " + path.string());
}

CaseRecord read_case_csv(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open " + path.string());
    const std::string where = path.string();
    CaseRecord r;
    std::string line;
    if (!std::getline(in, line) || line.rfind("# hydrosurr-case v1", 0) != 0)
        throw DataError(where + ": missing '# hydrosurr-case v1' header");
    bool have_dt = false, have_frame = false;
    std::istringstream hdr(line.substr(19));
    for (std::string kv; hdr >> kv;) {
        const auto eq = kv.find('=');
        if (eq == std::string::npos) throw DataError(where + ": malformed header field '" + kv + "'");
        const std::string key = kv.substr(0, eq), value = kv.substr(eq + 1);
        if (key == "case_id") r.case_id = value;
        else if (key == "vehicle") r.vehicle = value;
        else if (key == "U") r.params.U = parse_double(value, where);
        else if (key == "phi_deg") r.params.phi_deg = parse_double(value, where);
        else if (key == "rho") r.params.rho = parse_double(value, where);
        else if (key == "H") r.params.H = parse_double(value, where);
        else if (key == "dt") {
            r.dt = parse_double(value, where);
            have_dt = true;
        } else if (key == "frame") {
            if (value == "solver") r.frame = Frame::solver;
            else if (value == "vehicle") r.frame = Frame::vehicle;
            else throw DataError(where + ": unknown frame '" + value + "'");
            have_frame = true;
        }
    }
    if (r.case_id.empty() || !have_dt || !have_frame)
        throw DataError(where + ": header needs case_id, frame and dt");

    if (!std::getline(in, line)) throw DataError(where + ": missing column header");
    const auto cols = split(line, ',');
    if (cols.empty() || cols[0] != "t" || (cols.size() - 1) % 3 != 0)
        throw DataError(where + ": column header must be t followed by Fx,Fy,Fz triples");
    for (std::size_t c = 1; c < cols.size(); c += 3) {
        const auto colon = cols[c].rfind(':');
        const std::string name = cols[c].substr(0, colon);
        if (colon == std::string::npos || cols[c] != name + ":Fx" || cols[c + 1] != name + ":Fy" ||
            cols[c + 2] != name + ":Fz")
            throw DataError(where + ": bad force columns near '" + cols[c] + "'");
        r.surfaces.push_back(name);
    }
    std::size_t row = 2;
    while (std::getline(in, line)) {
        ++row;
        if (line.empty()) continue;
        const auto cells = split(line, ',');
        const std::string at = where + ":" + std::to_string(row);
        if (cells.size() != cols.size()) throw DataError(at + ": expected " + std::to_string(cols.size()) + " cells");
        r.t.push_back(parse_double(cells[0], at));
        for (std::size_t c = 1; c < cells.size(); ++c) r.forces.push_back(parse_double(cells[c], at));
    }
    for (std::size_t k = 1; k < r.t.size(); ++k)
        if (std::abs((r.t[k] - r.t[k - 1]) - r.dt) > 1e-6 * r.dt)
            throw DataError(where + ": non-uniform timestep at row " + std::to_string(k + 3));
    return r;
}

}  // namespace hydrosurr::dataset
