#pragma once

#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "tensorfn/tensorfn.hpp"

namespace tensorfn::cli {

using Json = nlohmann::ordered_json;

enum class Command { eval, grad, taylor, solve, check };

Command parse_command(const std::string& name);
std::string to_string(Command c);

enum class SolveKind { power, commutator, log };

/// One unit of work, read from a job document and optionally overridden by flags.
struct JobSpec {
  Command command = Command::eval;
  std::string fn;
  Matrix3 a = Matrix3::Zero();
  int order = 1;
  std::vector<Matrix3> directions;  ///< grad: optional contraction; taylor: X
  double cluster_tol = kDefaultClusterTol;
  double symmetry_tol = 1e-12;
  CoeffMethod method = CoeffMethod::divided_difference;
  bool dense = false;
  int quad_points = kDefaultQuadPoints;
  SolveKind solve_kind = SolveKind::power;
  int power = 2;
  Matrix3 rhs = Matrix3::Zero();
};

inline constexpr int kMaxOrder = 6;
inline constexpr int kMaxDenseOrder = 4;

/// Exit codes per error class.
inline constexpr int kExitOk = 0;
inline constexpr int kExitCheckFailed = 1;
inline constexpr int kExitParse = 2;
inline constexpr int kExitDomain = 3;
inline constexpr int kExitNumerical = 4;

JobSpec parse_job(const Json& doc);
Json job_to_json(const JobSpec& job);

/// Validates the job (symmetry, order range, required fields). Throws ArgumentError.
void validate(const JobSpec& job);

/// Runs the job and returns the result document. For `check`, sets all_passed.
Json run(const JobSpec& job, bool* all_passed = nullptr);

Json matrix_to_json(const Matrix3& m);
Matrix3 matrix_from_json(const Json& j, const std::string& what);

/// Maps the active exception to an exit code and writes a diagnostic to `message`.
int exit_code_for_current_exception(std::string& message);

}  // namespace tensorfn::cli
