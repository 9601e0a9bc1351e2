#pragma once

// JSON round-trip for schedules: generator terms with labels, supports and
// penalties, slices with durations and coefficient maps.

#include "embz/circuit.hpp"

#include <json.hpp>

#include <string>

namespace embz {

inline nlohmann::json matrix_to_json(const Matrix& m) {
    nlohmann::json rows = nlohmann::json::array();
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        nlohmann::json row = nlohmann::json::array();
        for (Eigen::Index j = 0; j < m.cols(); ++j)
            row.push_back({m(i, j).real(), m(i, j).imag()});
        rows.push_back(std::move(row));
    }
    return rows;
}

inline Matrix matrix_from_json(const nlohmann::json& rows) {
    const auto nr = static_cast<Eigen::Index>(rows.size());
    const auto nc = nr ? static_cast<Eigen::Index>(rows.at(0).size()) : 0;
    Matrix m(nr, nc);
    for (Eigen::Index i = 0; i < nr; ++i)
        for (Eigen::Index j = 0; j < nc; ++j) {
            const auto& e = rows.at(i).at(j);
            m(i, j) = Complex(e.at(0).get<double>(), e.at(1).get<double>());
        }
    return m;
}

inline nlohmann::json schedule_to_json(const Schedule& schedule) {
    nlohmann::json j;
    j["terms"] = nlohmann::json::array();
    for (const auto& t : schedule.terms)
        j["terms"].push_back({{"label", t.label},
                              {"first_site", t.first_site},
                              {"window_dims", t.window_dims},
                              {"penalty", t.penalty},
                              {"matrix", matrix_to_json(t.matrix)}});
    j["slices"] = nlohmann::json::array();
    for (const auto& s : schedule.slices)
        j["slices"].push_back({{"duration", s.duration}, {"coefficients", s.coefficients}});
    return j;
}

inline Schedule schedule_from_json(const nlohmann::json& j) {
    Schedule schedule;
    for (const auto& t : j.at("terms"))
        schedule.terms.push_back(make_generator(t.at("label").get<std::string>(),
                                                matrix_from_json(t.at("matrix")),
                                                t.at("first_site").get<int>(),
                                                t.at("window_dims").get<std::vector<int>>(),
                                                t.at("penalty").get<double>()));
    for (const auto& s : j.at("slices")) {
        Slice slice;
        slice.duration = s.at("duration").get<double>();
        slice.coefficients = s.at("coefficients").get<std::map<std::string, double>>();
        schedule.slices.push_back(std::move(slice));
    }
    schedule.validate();
    return schedule;
}

}  // namespace embz
