#pragma once

#include <vector>

#include "json.hpp"

#include "bnn/types.hpp"

namespace bnn::ml::detail {

inline nlohmann::json vec_to_json(const Vec& v) {
    return std::vector<double>(v.data(), v.data() + v.size());
}

inline Vec vec_from_json(const nlohmann::json& j) {
    const auto xs = j.get<std::vector<double>>();
    return Eigen::Map<const Vec>(xs.data(), static_cast<Index>(xs.size()));
}

inline nlohmann::json mat_to_json(const Mat& m) {
    nlohmann::json rows = nlohmann::json::array();
    for (Index r = 0; r < m.rows(); ++r) {
        std::vector<double> row(static_cast<std::size_t>(m.cols()));
        for (Index c = 0; c < m.cols(); ++c) row[static_cast<std::size_t>(c)] = m(r, c);
        rows.push_back(row);
    }
    return rows;
}

inline Mat mat_from_json(const nlohmann::json& j) {
    const Index rows = static_cast<Index>(j.size());
    if (rows == 0) return Mat(0, 0);
    const Index cols = static_cast<Index>(j.at(0).size());
    Mat m(rows, cols);
    for (Index r = 0; r < rows; ++r)
        for (Index c = 0; c < cols; ++c)
            m(r, c) = j.at(static_cast<std::size_t>(r)).at(static_cast<std::size_t>(c)).get<double>();
    return m;
}

} // namespace bnn::ml::detail
