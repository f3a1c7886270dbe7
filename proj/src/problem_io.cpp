#include "otg/problem_io.hpp"

#include <fstream>
#include <sstream>

#include "json.hpp"

namespace otg::io {

namespace {

using nlohmann::json;

std::vector<double> get_array(const json& j, const char* key, std::size_t n, const char* where) {
    if (!j.contains(key)) {
        throw std::runtime_error(std::string(where) + ": missing '" + key + "'");
    }
    const json& a = j.at(key);
    if (!a.is_array() || a.size() != n) {
        throw std::runtime_error(std::string(where) + ": '" + key + "' must be an array of " +
                                 std::to_string(n) + " numbers");
    }
    std::vector<double> out(n);
    for (std::size_t i = 0; i < n; ++i) {
        out[i] = a[i].get<double>();
    }
    return out;
}

std::vector<KinematicState> parse_states(const json& j, std::size_t n, const char* where) {
    const auto p = get_array(j, "position", n, where);
    const auto v = get_array(j, "velocity", n, where);
    const auto a = get_array(j, "acceleration", n, where);
    std::vector<KinematicState> out(n);
    for (std::size_t i = 0; i < n; ++i) {
        out[i] = {p[i], v[i], a[i]};
    }
    return out;
}

std::vector<Limits> parse_limits(const json& j, std::size_t n) {
    const auto v_max = get_array(j, "max_velocity", n, "limits");
    const auto a_max = get_array(j, "max_acceleration", n, "limits");
    const auto j_max = get_array(j, "max_jerk", n, "limits");
    std::vector<double> v_min(n), a_min(n);
    if (j.contains("min_velocity")) {
        v_min = get_array(j, "min_velocity", n, "limits");
    } else {
        for (std::size_t i = 0; i < n; ++i) {
            v_min[i] = -v_max[i];
        }
    }
    if (j.contains("min_acceleration")) {
        a_min = get_array(j, "min_acceleration", n, "limits");
    } else {
        for (std::size_t i = 0; i < n; ++i) {
            a_min[i] = -a_max[i];
        }
    }
    std::vector<Limits> out(n);
    for (std::size_t i = 0; i < n; ++i) {
        out[i] = {v_min[i], v_max[i], a_min[i], a_max[i], j_max[i]};
    }
    return out;
}

}  // namespace

LoadResult parse_problem(const std::string& text, Problem& out) {
    LoadResult res;
    try {
        const json j = json::parse(text);
        const auto n = j.at("degrees_of_freedom").get<std::size_t>();
        if (n == 0) {
            res.error = "degrees_of_freedom must be positive";
            return res;
        }
        out.input.dof_count = n;
        out.input.current = parse_states(j.at("current"), n, "current");
        out.input.target = parse_states(j.at("target"), n, "target");
        out.input.limits = parse_limits(j.at("limits"), n);
        out.control_cycle = j.value("control_cycle", 1e-3);
        out.waypoints.clear();
        if (j.contains("waypoints")) {
            for (const json& w : j.at("waypoints")) {
                Waypoint wp;
                wp.target = parse_states(w, n, "waypoint");
                if (w.contains("limits")) {
                    wp.limits = parse_limits(w.at("limits"), n);
                }
                out.waypoints.push_back(std::move(wp));
            }
        }
        res.ok = true;
    } catch (const json::parse_error& e) {
        res.error = e.what();  // carries byte position diagnostics
    } catch (const std::exception& e) {
        res.error = e.what();
    }
    return res;
}

LoadResult load_problem_file(const std::string& path, Problem& out) {
    std::ifstream f(path);
    if (!f) {
        return {false, "cannot open '" + path + "'"};
    }
    std::stringstream ss;
    ss << f.rdbuf();
    return parse_problem(ss.str(), out);
}

std::string problem_to_json(const InputParameters& input) {
    json j;
    const std::size_t n = input.dof_count;
    j["degrees_of_freedom"] = n;
    auto states = [&](const std::vector<KinematicState>& xs) {
        json s;
        for (std::size_t i = 0; i < n; ++i) {
            s["position"].push_back(xs[i].p);
            s["velocity"].push_back(xs[i].v);
            s["acceleration"].push_back(xs[i].a);
        }
        return s;
    };
    j["current"] = states(input.current);
    j["target"] = states(input.target);
    json lim;
    for (std::size_t i = 0; i < n; ++i) {
        lim["min_velocity"].push_back(input.limits[i].v_min);
        lim["max_velocity"].push_back(input.limits[i].v_max);
        lim["min_acceleration"].push_back(input.limits[i].a_min);
        lim["max_acceleration"].push_back(input.limits[i].a_max);
        lim["max_jerk"].push_back(input.limits[i].j_max);
    }
    j["limits"] = lim;
    return j.dump(2);
}

bool write_problem_file(const std::string& path, const InputParameters& input) {
    std::ofstream f(path);
    if (!f) {
        return false;
    }
    f << problem_to_json(input) << "\n";
    return static_cast<bool>(f);
}

}  // namespace otg::io
