// Internal JSON helpers shared by the serialization code. Doubles are stored
// as hex-float strings so that round-trips are bit-exact.
#pragma once

#include <json.hpp>

#include <Eigen/Core>

#include <filesystem>
#include <string>

namespace tubempc::io {

using json = nlohmann::json;

std::string to_hexfloat(double v);
double from_hexfloat(const std::string& s);

json vector_to_json(const Eigen::VectorXd& v);
Eigen::VectorXd vector_from_json(const json& j);

/// Row-major nested arrays of hex-float strings.
json matrix_to_json(const Eigen::MatrixXd& m);
Eigen::MatrixXd matrix_from_json(const json& j);

json load_json_file(const std::filesystem::path& path);
void save_json_file(const json& j, const std::filesystem::path& path, int indent = 2);

}  // namespace tubempc::io
