#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "qwalk/io.hpp"

namespace qwalk {

// Parsed CLI configuration: one model spec (explicit profile or Grover
// shorthand), an initial state, and a horizon.  The raw document is kept for
// provenance echoes in every emitted artifact.
struct RunConfig {
    CoinProfile profile;
    std::optional<TwoPhaseOneDefect> grover;
    State initial{3, 0, 0};
    long t = 100;
    json echo;
};

inline RunConfig parse_run_config(const json& j) {
    if (!j.is_object()) throw ConfigParse("config must be a JSON object");

    const bool has_grover = j.contains("grover");
    const bool has_profile = j.contains("left") || j.contains("right") ||
                             j.contains("middle") || j.contains("n");
    if (has_grover && has_profile)
        throw ConfigParse("config has both a \"grover\" shorthand and an explicit "
                          "profile; exactly one model spec is allowed");
    if (!has_grover && !has_profile)
        throw ConfigParse("config needs a model spec: either \"grover\" shorthand or "
                          "an explicit profile");

    RunConfig rc;
    rc.echo = j;

    if (has_grover) {
        const json& g = j.at("grover");
        if (!g.is_object()) throw ConfigParse("field grover: expected an object");
        for (const char* key :
             {"theta_m", "delta_m", "theta_o", "delta_o", "theta_p", "delta_p"})
            if (!g.contains(key))
                throw ConfigParse(std::string("field grover.") + key + " is missing");
        TwoPhaseOneDefect model;
        model.m = {angle_from_json(g.at("theta_m"), "grover.theta_m"),
                   angle_from_json(g.at("delta_m"), "grover.delta_m")};
        model.o = {angle_from_json(g.at("theta_o"), "grover.theta_o"),
                   angle_from_json(g.at("delta_o"), "grover.delta_o")};
        model.p = {angle_from_json(g.at("theta_p"), "grover.theta_p"),
                   angle_from_json(g.at("delta_p"), "grover.delta_p")};
        rc.profile = model.profile();  // model validation errors propagate
        rc.grover = model;
    } else {
        rc.profile = profile_from_json(j);
    }

    if (j.contains("initial")) {
        const json& ini = j.at("initial");
        if (!ini.is_object() || !ini.contains("x") || !ini.contains("vector"))
            throw ConfigParse("field initial: needs \"x\" and \"vector\"");
        if (!ini.at("x").is_number_integer())
            throw ConfigParse("field initial.x: expected an integer site");
        const int x = ini.at("x").get<int>();
        const json& vec = ini.at("vector");
        if (!vec.is_array() || static_cast<int>(vec.size()) != rc.profile.n)
            throw ConfigParse("field initial.vector: expected " +
                              std::to_string(rc.profile.n) + " [re, im] pairs");
        std::vector<cplx> v;
        v.reserve(vec.size());
        for (std::size_t k = 0; k < vec.size(); ++k)
            v.push_back(complex_from_json(vec[k],
                                          "initial.vector[" + std::to_string(k) + "]"));
        rc.initial = State::point_mass(rc.profile.n, x, v);
    } else {
        rc.initial = default_origin_state(rc.profile.n);
    }

    if (j.contains("t")) {
        if (!j.at("t").is_number_integer() || j.at("t").get<long>() < 0)
            throw ConfigParse("field t: expected a nonnegative integer");
        rc.t = j.at("t").get<long>();
    }
    return rc;
}

}  // namespace qwalk
