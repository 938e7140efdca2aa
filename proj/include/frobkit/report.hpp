#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "frobkit/algebra.hpp"

namespace frobkit {

struct LabeledValue {
    std::string label;
    Complex value;
};

/// Outcome of one named numerical check. `passed` always equals residual <= tolerance;
/// use make() or set_residual() to keep the two in step.
struct VerificationReport {
    std::string check_name;
    std::string model;
    std::vector<LabeledValue> point;
    double residual = 0.0;
    double tolerance = 0.0;
    bool passed = false;
    std::optional<std::string> convention;
    std::map<std::string, std::string> metadata;

    static VerificationReport make(std::string check_name, std::string model, std::vector<LabeledValue> point,
                                   double residual, double tolerance);

    void set_residual(double r) {
        residual = r;
        passed = residual <= tolerance;
    }
    void set_tolerance(double t) {
        tolerance = t;
        passed = residual <= tolerance;
    }
};

using ReportList = std::vector<VerificationReport>;

/// Labels coordinates as x1, x2, ...
std::vector<LabeledValue> label_point(std::span<const Complex> coords, const std::string& prefix = "x");

bool all_passed(const ReportList& reports);

std::string format_number(double v);
std::string format_complex(Complex z);

} // namespace frobkit
