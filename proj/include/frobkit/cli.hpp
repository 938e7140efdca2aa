#pragma once

#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "frobkit/algebra.hpp"
#include "frobkit/report.hpp"

namespace frobkit {

/// Comma-separated coordinates; each entry is a real number or a "re:im" pair.
/// Throws std::invalid_argument on malformed input.
std::vector<Complex> parse_point(const std::string& text);

struct SuiteOptions {
    std::optional<double> tolerance; // --tol
    bool perm_search = true;
};

/// With an explicit tolerance T, checks whose default tolerance is at least 1e-6
/// (finite-difference backed) use T; tighter closed-form checks use min(default, T).
void apply_tolerance(ReportList& reports, const std::optional<double>& tolerance);

/// The full identity suite at one point: flat metric, structure constants, WDVV,
/// prepotential, Darboux-Egoroff system, Lamé sum, omega and V spectrum, tau gradient,
/// closed-form oracles (nm11, nm02) and the Euler-top family along the second coordinate.
ReportList verify_suite(const std::string& model_id, std::span<const Complex> point, const SuiteOptions& options = {});

/// Tau-function checks for nm11 at `point`.
ReportList tau_suite(std::span<const Complex> point, const SuiteOptions& options = {});

std::string reports_to_json(const ReportList& reports);
std::string reports_to_csv(const ReportList& reports);

/// Runs one frobkit command (argv without the program name). Returns the exit code:
/// 0 pass, 1 check failure, 2 usage error, 3 degeneracy.
int run_command(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

} // namespace frobkit
