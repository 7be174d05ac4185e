#pragma once

#include <string>

#include <Eigen/Dense>
#include <json.hpp>

namespace bubblefield::detail {

/// Serializes with every floating-point number written as %.17g.
/// Non-finite numbers become null.
std::string dump_json(const nlohmann::json& value, int indent = 2);

nlohmann::json to_json(const Eigen::VectorXd& v);
nlohmann::json to_json(const Eigen::MatrixXd& m);

/// %.17g formatting shared by the JSON and CSV writers.
std::string format_double(double v);

}  // namespace bubblefield::detail
