#include "frobkit/report.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>

namespace frobkit {

VerificationReport VerificationReport::make(std::string check_name, std::string model, std::vector<LabeledValue> point,
                                            double residual, double tolerance) {
    VerificationReport r;
    r.check_name = std::move(check_name);
    r.model = std::move(model);
    r.point = std::move(point);
    r.tolerance = tolerance;
    r.set_residual(residual);
    return r;
}

std::vector<LabeledValue> label_point(std::span<const Complex> coords, const std::string& prefix) {
    std::vector<LabeledValue> out;
    for (std::size_t i = 0; i < coords.size(); ++i)
        out.push_back({prefix + std::to_string(i + 1), coords[i]});
    return out;
}

bool all_passed(const ReportList& reports) {
    return std::all_of(reports.begin(), reports.end(), [](const VerificationReport& r) { return r.passed; });
}

std::string format_number(double v) {
    if (std::isnan(v))
        return "nan";
    char buf[32];
    const auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
}

std::string format_complex(Complex z) { return "[" + format_number(z.real()) + ", " + format_number(z.imag()) + "]"; }

} // namespace frobkit
