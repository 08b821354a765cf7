#pragma once

#include <ostream>
#include <string>
#include <vector>

#include <json.hpp>

namespace panolayout::cli {

/// Exit codes: 0 success, 1 invalid input or failed check, 2 usage error.
int run(int argc, char** argv);
/// `args` excludes the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

/// Evaluates one loss fixture case:
///   {"name", "loss": "G"|"D"|"recon"|"cycle"|"emp"|"total", inputs...,
///    "expected"?, "tolerance"?}
/// Inputs: "fake"/"real" score arrays; "a"/"b" or "x"/"emptied" image arrays
/// of {"width","height","channels","data"}; "g","d","cycle","lambda_gan",
/// "lambda_cycle" for total.
double evaluate_loss_case(const nlohmann::json& entry);

}  // namespace panolayout::cli
