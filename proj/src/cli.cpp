#include "frobkit/cli.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <future>
#include <limits>
#include <map>
#include <memory>
#include <ostream>
#include <sstream>
#include <thread>

#include <CLI11.hpp>
#include <json.hpp>

#include "frobkit/canonical.hpp"
#include "frobkit/errors.hpp"
#include "frobkit/eulertop.hpp"
#include "frobkit/frobenius.hpp"
#include "frobkit/models.hpp"
#include "frobkit/painleve.hpp"

namespace frobkit {

using ojson = nlohmann::ordered_json;

namespace {

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t");
    if (b == std::string::npos)
        return "";
    const auto e = s.find_last_not_of(" \t");
    return s.substr(b, e - b + 1);
}

double parse_real(const std::string& text) {
    const std::string t = trim(text);
    std::size_t used = 0;
    double v = 0.0;
    try {
        v = std::stod(t, &used);
    } catch (const std::exception&) {
        throw std::invalid_argument("not a number: '" + text + "'");
    }
    if (used != t.size())
        throw std::invalid_argument("not a number: '" + text + "'");
    return v;
}

std::vector<std::string> split(const std::string& text, char sep) {
    std::vector<std::string> parts;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, sep))
        parts.push_back(item);
    if (!text.empty() && text.back() == sep)
        parts.emplace_back();
    return parts;
}

struct Range {
    double first, last;
    int count;

    std::vector<double> values() const {
        std::vector<double> out;
        for (int k = 0; k < count; ++k)
            out.push_back(count == 1 ? first : first + (last - first) * k / (count - 1));
        return out;
    }
};

Range parse_range(const std::string& text) {
    const auto parts = split(text, ':');
    if (parts.size() != 3)
        throw std::invalid_argument("range must be a:b:n, got '" + text + "'");
    const double n = parse_real(parts[2]);
    if (n < 1 || n != std::floor(n))
        throw std::invalid_argument("range count must be a positive integer");
    return {parse_real(parts[0]), parse_real(parts[1]), static_cast<int>(n)};
}

double max_entry(const ComplexMatrix& m) { return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff(); }

VerificationReport report(const std::string& name, const std::string& model, const std::vector<LabeledValue>& point,
                          double residual, double tolerance) {
    return VerificationReport::make(name, model, point, residual, tolerance);
}

// Max distance after greedy nearest pairing of a against b.
double paired_distance(std::span<const Complex> a, std::span<const Complex> b) {
    const auto aligned = align_to_reference(a, b);
    double worst = 0.0;
    for (std::size_t i = 0; i < b.size(); ++i)
        worst = std::max(worst, std::abs(aligned[i] - b[i]));
    return worst;
}

double max_diff(std::span<const Complex> a, std::span<const Complex> b) {
    double worst = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i)
        worst = std::max(worst, std::abs(a[i] - b[i]));
    return worst;
}

std::vector<Complex> squares(std::span<const Complex> v) {
    std::vector<Complex> out;
    for (Complex z : v)
        out.push_back(z * z);
    return out;
}

VerificationReport oracle_report(const std::string& model, const std::vector<LabeledValue>& point,
                                 const CanonicalFrame& frame, std::span<const Complex> alphas,
                                 std::span<const Complex> u, std::span<const Complex> lame_sq,
                                 std::span<const Complex> omega_sq) {
    const double worst = std::max({max_diff(frame.alphas, alphas), max_diff(frame.u, u),
                                   max_diff(frame.lame_sq, lame_sq), max_diff(squares(frame.omega), omega_sq)});
    auto r = report("oracle_equivalence", model, point, worst, 1e-8);
    r.metadata["quantities"] = "alpha,u,lame_sq,omega_sq";
    return r;
}

VerificationReport pipeline_top_family(const Chart& chart, std::span<const Complex> x, const CanonicalFrame& centre,
                                       bool perm_search) {
    const std::vector<Complex> base(x.begin(), x.end());
    const std::vector<Complex> ref = centre.alphas;
    auto cache = std::make_shared<std::map<std::pair<double, double>, CanonicalFrame>>();
    auto frame_at = [chart, base, ref, cache](Complex t) {
        const std::pair<double, double> key{t.real(), t.imag()};
        if (auto it = cache->find(key); it != cache->end())
            return it->second;
        auto y = base;
        y[1] = t;
        RotationOptions ro;
        ro.contour = true;
        ro.reference_alphas = ref;
        return cache->emplace(key, full_frame(chart, y, ro)).first->second;
    };
    TopCurve curve;
    curve.s = [frame_at](Complex t) {
        const auto f = frame_at(t);
        return (f.u[1] - f.u[0]) / (f.u[2] - f.u[0]);
    };
    curve.omega = [frame_at](Complex t) {
        const auto f = frame_at(t);
        return std::array<Complex, 3>{f.omega[0] * f.omega[0], f.omega[1] * f.omega[1], f.omega[2] * f.omega[2]};
    };
    curve.squares = true;
    std::vector<Complex> grid;
    for (int k = 0; k < 5; ++k)
        grid.push_back(x[1] * (1.0 + 0.02 * (k - 2)));
    ParametricOptions popt;
    popt.perm_search = perm_search;
    popt.contour_radius = 1e-3 * std::abs(x[1]);
    popt.contour_points = 8;
    auto r = parametric_residual(curve, grid, 1e-6, popt, chart.name());
    r.check_name = "euler_top_pipeline";
    r.point = label_point(x);
    r.metadata["parameter"] = chart.slots()[1].name;
    return r;
}

} // namespace

std::vector<Complex> parse_point(const std::string& text) {
    if (trim(text).empty())
        throw std::invalid_argument("empty point");
    std::vector<Complex> out;
    for (const auto& item : split(text, ',')) {
        const auto parts = split(item, ':');
        if (parts.size() == 1)
            out.emplace_back(parse_real(parts[0]));
        else if (parts.size() == 2)
            out.emplace_back(parse_real(parts[0]), parse_real(parts[1]));
        else
            throw std::invalid_argument("bad coordinate '" + item + "' (expected x or re:im)");
    }
    return out;
}

void apply_tolerance(ReportList& reports, const std::optional<double>& tolerance) {
    if (!tolerance)
        return;
    for (auto& r : reports)
        r.set_tolerance(r.tolerance >= 1e-6 ? *tolerance : std::min(r.tolerance, *tolerance));
}

ReportList verify_suite(const std::string& model_id, std::span<const Complex> x, const SuiteOptions& options) {
    const Chart chart = Chart::from_model_id(model_id);
    if (x.size() != chart.dimension())
        throw std::invalid_argument("model " + model_id + " needs " + std::to_string(chart.dimension()) +
                                    " coordinates, got " + std::to_string(x.size()));
    const std::string model = chart.name();
    const auto point = label_point(x);
    ReportList out;

    const ComplexMatrix eta = flat_metric(chart, x);
    const ComplexMatrix expected = chart.expected_metric();
    out.push_back(report("flat_metric", model, point, max_entry(eta - expected), 1e-9));

    const Tensor3 c = structure_constants(chart, x);
    const std::size_t dim = chart.dimension(), e = chart.unit_index();
    // dW/dt_e at a critical point is -1 in charts that flip the sign of the unit coordinate.
    const RationalPotential W = chart.potential(x);
    const Complex unit_scale = chart.tangent_fields(x)[e].evaluate(W, W.critical_points().front());
    double unit_defect = 0.0;
    for (std::size_t a = 0; a < dim; ++a)
        for (std::size_t b = 0; b < dim; ++b)
            unit_defect = std::max(unit_defect, std::abs(c(a, b, e) - unit_scale * expected(a, b)));
    auto unit_rep = report("unit_structure_constants", model, point, unit_defect, 1e-9);
    unit_rep.metadata["unit_scale"] = format_complex(unit_scale);
    out.push_back(std::move(unit_rep));
    out.push_back(report("wdvv", model, point, wdvv_residual(c, eta.inverse()), 1e-8));
    out.push_back(report("structure_constant_symmetry", model, point, symmetry_defect(c), 1e-9));
    if (model == "nm11") {
        const double worst = std::max({std::abs(c(0, 0, 0) - 1.0), std::abs(c(0, 1, 2) - 1.0),
                                       std::abs(c(1, 1, 1) - 1.0 / x[1]), std::abs(c(1, 2, 2) - x[2]),
                                       std::abs(c(2, 2, 2) - x[1])});
        out.push_back(report("structure_constant_values", model, point, worst, 1e-8));
    }
    if (model == "nm11" || model == "nm02") {
        try {
            for (auto& r : prepotential_checks(model, x))
                out.push_back(std::move(r));
        } catch (const DegenerateError& err) {
            if (err.kind() != "log-branch")
                throw;
        }
    }

    for (auto& r : darboux_egoroff_residuals(chart, x))
        out.push_back(std::move(r));

    const CanonicalFrame frame = full_frame(chart, x);
    Complex lame_sum{0.0};
    for (Complex h : frame.lame_sq)
        lame_sum += h;
    const Complex eta_ee = expected(static_cast<Eigen::Index>(e), static_cast<Eigen::Index>(e));
    out.push_back(report("lame_sum", model, point, std::abs(lame_sum - eta_ee), 1e-9));

    if (frame.size() == 3) {
        const OmegaSpectrum sp = omega_and_spectrum(frame);
        const double r2 = r_squared_from_degrees(chart);
        auto casimir = report("omega_casimir", model, point, std::abs(sp.r_squared - r2), 1e-9);
        casimir.metadata["r_squared"] = format_number(r2);
        out.push_back(std::move(casimir));
        const double rr = std::sqrt(r2);
        const std::vector<Complex> target{Complex{-rr}, Complex{0.0}, Complex{rr}};
        out.push_back(report("v_spectrum", model, point, paired_distance(sp.eigenvalues, target), 1e-8));
        if (model == "nm11") {
            double worst = 0.0;
            for (std::size_t i = 0; i < 3; ++i)
                worst = std::max(worst, std::abs(sp.omega[i] * sp.omega[i] + 0.25 * frame.lame_sq[i] / eta_ee));
            out.push_back(report("omega_lame_relation", model, point, worst, 1e-9));
        }
        const GradientFunction closed = model == "nm11" ? GradientFunction(nm11_log_tau_gradient) : GradientFunction();
        for (auto& r : tau_gradient_check(chart, frame, closed))
            out.push_back(std::move(r));
        out.push_back(pipeline_top_family(chart, x, frame, options.perm_search));
    }

    if (model == "nm11") {
        const ClosedFormFrame cf = nm11_point_forms(x);
        RotationOptions ro;
        ro.contour = true;
        ro.reference_alphas = cf.alphas;
        out.push_back(oracle_report(model, point, full_frame(chart, x, ro), cf.alphas, cf.u, cf.lame_sq, cf.omega_sq));
    } else if (model == "nm02") {
        const Nm02Data d = nm02_closed_forms(x[0], x[1], x[2]);
        RotationOptions ro;
        ro.contour = true;
        ro.reference_alphas.assign(d.alphas.begin(), d.alphas.end());
        out.push_back(oracle_report(model, point, full_frame(chart, x, ro), d.alphas, d.u, d.lame_sq, d.omega_sq));
        Nm02CheckOptions no;
        no.perm_search = options.perm_search;
        for (auto& r : nm02_omega_checks(x[0], x[1], x[2], no))
            out.push_back(std::move(r));
    }

    apply_tolerance(out, options.tolerance);
    return out;
}

ReportList tau_suite(std::span<const Complex> x, const SuiteOptions& options) {
    if (x.size() != 3)
        throw std::invalid_argument("tau needs 3 coordinates (x1, x2, x3)");
    const Chart chart = Chart::nm11();
    const std::string model = "nm11";
    const auto point = label_point(x);
    const Complex x2 = x[1], x3 = x[2];
    const Complex q = x2 / (x3 * x3 * x3);
    ReportList out;

    const Complex log_tau = nm11_log_tau(x2, x3);
    std::vector<Complex> grad(3);
    for (std::size_t a = 0; a < 3; ++a) {
        auto along = [&](Complex t) {
            std::vector<Complex> y(x.begin(), x.end());
            y[a] = t;
            return nm11_log_tau(y[1], y[2]);
        };
        const double radius = std::min(1e-3 * std::max(1.0, std::abs(x[a])), 0.25 * std::abs(x[a]) + 1e-3);
        grad[a] = contour_derivative(along, x[a], 1, radius, 16);
    }

    const double r2 = r_squared_from_degrees(chart);
    Complex euler{0.0};
    for (std::size_t a = 0; a < 3; ++a)
        euler += chart.degrees()[a] * x[a] * grad[a];
    auto e_rep = report("tau_euler_action_fd", model, point, std::abs(euler - r2), 1e-8);
    e_rep.metadata["log_tau"] = format_complex(log_tau);
    out.push_back(std::move(e_rep));
    out.push_back(report("tau_identity_action_fd", model, point, std::abs(grad[0]), 1e-10));
    auto x3_rep =
        report("tau_x3_derivative", model, point, std::abs(x3 * grad[2] - 0.125 / (1.0 - 6.75 * q)), 1e-8);
    x3_rep.metadata["q"] = format_complex(q);
    out.push_back(std::move(x3_rep));
    out.push_back(report("tau_closed_gradient", model, point, max_diff(grad, nm11_log_tau_gradient(x)), 1e-8));

    for (auto& r : tau_gradient_check(chart, full_frame(chart, x), nm11_log_tau_gradient))
        out.push_back(std::move(r));

    // omega with q(omega) = q: W = omega² solves q (W + 3)³ = 4 (W - 1)².
    const auto ws = roots_all(Polynomial{27.0 * q - 4.0, 27.0 * q + 8.0, 9.0 * q - 4.0, q});
    const Complex w0 = std::sqrt(ws.front());
    auto delta = [x3](Complex w) {
        const Complex w2 = w * w;
        const Complex qq = 4.0 * (w2 - 1.0) * (w2 - 1.0) / std::pow(w2 + 3.0, 3);
        return nm11_log_tau(qq * x3 * x3 * x3, x3) - nm11_log_tau_omega(w, x3);
    };
    const Complex d0 = delta(w0);
    double drift = 0.0;
    for (int k = -2; k <= 2; ++k)
        drift = std::max(drift, std::abs(std::exp(24.0 * (delta(w0 * (1.0 + 0.01 * k)) - d0)) - 1.0));
    auto w_rep = report("tau_omega_form_constant", model, point, drift, 1e-9);
    w_rep.metadata["omega"] = format_complex(w0);
    w_rep.metadata["additive_constant"] = format_complex(d0);
    out.push_back(std::move(w_rep));

    apply_tolerance(out, options.tolerance);
    return out;
}

namespace {

ojson complex_json(Complex z) { return ojson::array({z.real(), z.imag()}); }

ojson vector_json(std::span<const Complex> v) {
    ojson a = ojson::array();
    for (Complex z : v)
        a.push_back(complex_json(z));
    return a;
}

ojson matrix_json(const ComplexMatrix& m) {
    ojson rows = ojson::array();
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        ojson row = ojson::array();
        for (Eigen::Index j = 0; j < m.cols(); ++j)
            row.push_back(complex_json(m(i, j)));
        rows.push_back(std::move(row));
    }
    return rows;
}

ojson report_json(const VerificationReport& r) {
    ojson j;
    j["check_name"] = r.check_name;
    j["model"] = r.model;
    ojson pt = ojson::array();
    for (const auto& lv : r.point)
        pt.push_back({{"label", lv.label}, {"value", complex_json(lv.value)}});
    j["point"] = std::move(pt);
    j["residual"] = r.residual;
    j["tolerance"] = r.tolerance;
    j["passed"] = r.passed;
    j["convention"] = r.convention ? ojson(*r.convention) : ojson(nullptr);
    ojson meta = ojson::object();
    for (const auto& [k, v] : r.metadata)
        meta[k] = v;
    j["metadata"] = std::move(meta);
    return j;
}

std::string csv_field(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos)
        return s;
    std::string out = "\"";
    for (char ch : s)
        out += ch == '"' ? std::string("\"\"") : std::string(1, ch);
    return out + "\"";
}

} // namespace

std::string reports_to_json(const ReportList& reports) {
    ojson a = ojson::array();
    for (const auto& r : reports)
        a.push_back(report_json(r));
    return a.dump(2) + "\n";
}

std::string reports_to_csv(const ReportList& reports) {
    std::string out = "check_name,model,residual,tolerance,passed,convention\n";
    for (const auto& r : reports)
        out += csv_field(r.check_name) + "," + csv_field(r.model) + "," + format_number(r.residual) + "," +
               format_number(r.tolerance) + "," + (r.passed ? "true" : "false") + "," +
               csv_field(r.convention.value_or("")) + "\n";
    return out;
}

namespace {

struct Common {
    std::string model = "nm11";
    std::string point;
    std::optional<double> tol;
    std::string out;
    std::optional<std::uint64_t> seed;
    std::string perm_search = "on";
    std::string format = "json";

    SuiteOptions suite() const { return {tol, perm_search == "on"}; }
};

void add_common(CLI::App* app, Common& c) {
    app->add_option("--model", c.model, "nm11, nm02 or custom:n,m")->capture_default_str();
    app->add_option("--point", c.point, "comma-separated coordinates, each x or re:im");
    app->add_option("--tol", c.tol, "tolerance override")->check(CLI::PositiveNumber);
    app->add_option("--out", c.out, "write output to FILE instead of stdout");
    app->add_option("--seed", c.seed, "seed for random evaluation points");
    app->add_option("--perm-search", c.perm_search, "relabelling search for Euler-top and omega matches")
        ->check(CLI::IsMember({"on", "off"}))
        ->capture_default_str();
    app->add_option("--format", c.format, "report format")->check(CLI::IsMember({"json", "csv"}))->capture_default_str();
}

std::vector<Complex> point_or(const Common& c, std::vector<Complex> fallback) {
    return c.point.empty() ? fallback : parse_point(c.point);
}

std::vector<Complex> default_point(const std::string& model_id) {
    if (model_id == "nm11")
        return {0.0, 2.0, 1.0};
    if (model_id == "nm02")
        return {1.0, 1.0, 2.0};
    return {};
}

int emit(const Common& c, const std::string& text, std::ostream& out) {
    if (c.out.empty()) {
        out << text;
        return 0;
    }
    std::ofstream f(c.out);
    if (!f)
        throw std::invalid_argument("cannot open output file '" + c.out + "'");
    f << text;
    return 0;
}

int finish(const Common& c, const ReportList& reports, std::ostream& out) {
    emit(c, c.format == "csv" ? reports_to_csv(reports) : reports_to_json(reports), out);
    return all_passed(reports) ? 0 : 1;
}

int cmd_verify(const Common& c, int random_count, std::ostream& out) {
    std::vector<std::vector<Complex>> points;
    if (random_count > 0)
        points = random_points(c.model, random_count, c.seed.value_or(0));
    if (!c.point.empty() || points.empty()) {
        auto p = point_or(c, default_point(c.model));
        if (p.empty())
            throw std::invalid_argument("--point is required for model " + c.model);
        points.insert(points.begin(), std::move(p));
    }
    ReportList all;
    for (const auto& p : points)
        for (auto& r : verify_suite(c.model, p, c.suite()))
            all.push_back(std::move(r));
    return finish(c, all, out);
}

int cmd_frame(const Common& c, std::ostream& out) {
    const Chart chart = Chart::from_model_id(c.model);
    const auto x = point_or(c, default_point(c.model));
    if (x.size() != chart.dimension())
        throw std::invalid_argument("model " + c.model + " needs " + std::to_string(chart.dimension()) + " coordinates");
    const CanonicalFrame f = full_frame(chart, x);
    ojson j;
    j["model"] = chart.name();
    ojson pt = ojson::array();
    for (const auto& lv : label_point(x))
        pt.push_back({{"label", lv.label}, {"value", complex_json(lv.value)}});
    j["point"] = std::move(pt);
    j["alphas"] = vector_json(f.alphas);
    j["u"] = vector_json(f.u);
    j["lame_sq"] = vector_json(f.lame_sq);
    j["jacobian"] = matrix_json(f.jac);
    j["beta"] = matrix_json(f.beta);
    if (f.size() == 3) {
        const OmegaSpectrum sp = omega_and_spectrum(f);
        j["omega"] = vector_json(sp.omega);
        j["v_eigenvalues"] = vector_json(sp.eigenvalues);
        j["r_squared"] = complex_json(sp.r_squared);
    }
    if (c.format == "csv") {
        std::string text = "quantity,index,re,im\n";
        auto rows = [&](const char* name, std::span<const Complex> v) {
            for (std::size_t i = 0; i < v.size(); ++i)
                text += std::string(name) + "," + std::to_string(i + 1) + "," + format_number(v[i].real()) + "," +
                        format_number(v[i].imag()) + "\n";
        };
        rows("alpha", f.alphas);
        rows("u", f.u);
        rows("lame_sq", f.lame_sq);
        rows("omega", f.omega);
        return emit(c, text, out);
    }
    return emit(c, j.dump(2) + "\n", out);
}

struct SweepRow {
    double value;
    std::optional<ReportList> reports;
    std::string degeneracy;
};

int cmd_sweep(const Common& c, int param, const std::string& range_text, std::ostream& out, std::ostream& err) {
    const Chart chart = Chart::from_model_id(c.model);
    const auto base = point_or(c, default_point(c.model));
    if (base.size() != chart.dimension())
        throw std::invalid_argument("model " + c.model + " needs " + std::to_string(chart.dimension()) + " coordinates");
    if (param < 1 || static_cast<std::size_t>(param) > base.size())
        throw std::invalid_argument("--param must be between 1 and " + std::to_string(base.size()));
    const Range range = parse_range(range_text);
    const auto values = range.values();
    const SuiteOptions opts = c.suite();

    auto evaluate = [&](double v) {
        SweepRow row{v, std::nullopt, ""};
        auto x = base;
        x[static_cast<std::size_t>(param - 1)] = v;
        try {
            row.reports = verify_suite(c.model, x, opts);
        } catch (const NumericalError& e) {
            row.degeneracy = e.kind();
        }
        return row;
    };
    std::vector<SweepRow> rows(values.size());
    const std::size_t workers = std::max(1u, std::thread::hardware_concurrency());
    for (std::size_t start = 0; start < values.size(); start += workers) {
        std::vector<std::future<SweepRow>> batch;
        for (std::size_t k = start; k < std::min(values.size(), start + workers); ++k)
            batch.push_back(std::async(std::launch::async, evaluate, values[k]));
        for (std::size_t k = 0; k < batch.size(); ++k)
            rows[start + k] = batch[k].get();
    }

    std::vector<std::string> columns;
    for (const auto& row : rows)
        if (row.reports)
            for (const auto& r : *row.reports)
                if (std::find(columns.begin(), columns.end(), r.check_name) == columns.end())
                    columns.push_back(r.check_name);

    bool degenerate = false, failed = false;
    std::string text = chart.slots()[static_cast<std::size_t>(param - 1)].name;
    for (const auto& name : columns)
        text += "," + name;
    text += "\n";
    for (const auto& row : rows) {
        text += format_number(row.value);
        if (!row.reports) {
            degenerate = true;
            err << "frobkit: degeneracy at " << format_number(row.value) << ": " << row.degeneracy << "\n";
        } else {
            failed = failed || !all_passed(*row.reports);
        }
        for (const auto& name : columns) {
            double worst = std::nan("");
            if (row.reports)
                for (const auto& r : *row.reports)
                    if (r.check_name == name)
                        worst = std::isnan(worst) ? r.residual : std::max(worst, r.residual);
            text += "," + format_number(worst);
        }
        text += "\n";
    }
    emit(c, text, out);
    if (degenerate)
        return 3;
    return failed ? 1 : 0;
}

int cmd_pvi(const Common& c, const std::string& solution, const std::string& range_text, std::ostream& out) {
    const HitchinKind kind = parse_hitchin_kind(solution);
    const Range range = parse_range(range_text);
    if (range.count < 1)
        throw std::invalid_argument("empty range");
    const auto values = range.values();
    std::vector<Complex> grid(values.begin(), values.end());
    const std::vector<LabeledValue> point{{"t_first", grid.front()}, {"t_last", grid.back()}};
    const std::string model = "hitchin-" + to_string(kind);

    double worst = 0.0;
    Complex worst_t = grid.front();
    for (Complex t : grid) {
        const double r = std::abs(pvi_residual(hitchin_sample(kind, t)));
        if (r > worst) {
            worst = r;
            worst_t = t;
        }
    }
    ReportList reports;
    auto main = report("pvi_residual", model, point, worst, 1e-8);
    main.metadata["samples"] = std::to_string(grid.size());
    main.metadata["worst_parameter"] = format_complex(worst_t);
    reports.push_back(std::move(main));

    const PainleveSample control{Complex{3.0}, Complex{2.0}, Complex{0.0}, Complex{0.0}, std::nullopt};
    auto ctrl = report("pvi_constant_control", model, {{"s", 3.0}, {"y", 2.0}},
                       std::abs(pvi_residual(control) - 9.0 / 64.0), 1e-12);
    ctrl.metadata["expected"] = "9/64";
    reports.push_back(std::move(ctrl));

    if (kind == HitchinKind::K3Omega) {
        OmtoyCurve curve{[](Complex w) { return hitchin_solution(HitchinKind::K3Omega, w).y; },
                         [](Complex w) { return hitchin_solution(HitchinKind::K3Omega, w).s; },
                         [](Complex w) { return nm11_closed_forms(w).omega_sq; }};
        for (auto& r : omtoy_check(curve, grid, 1e-5, 1e-6, c.perm_search == "on", model))
            reports.push_back(std::move(r));
    }
    apply_tolerance(reports, c.tol);
    return finish(c, reports, out);
}

int cmd_tau(const Common& c, std::ostream& out) {
    if (c.model != "nm11")
        throw std::invalid_argument("tau is implemented for model nm11 only");
    const auto x = point_or(c, default_point("nm11"));
    return finish(c, tau_suite(x, c.suite()), out);
}

int cmd_top(const Common& c, const std::string& state_text, const std::string& s_end_text, int steps,
            std::ostream& out) {
    ReportList reports;
    if (!state_text.empty()) {
        const auto v = parse_point(state_text);
        if (v.size() != 4)
            throw std::invalid_argument("--state needs s,omega1,omega2,omega3");
        if (s_end_text.empty())
            throw std::invalid_argument("--s-end is required with --state");
        const auto se = parse_point(s_end_text);
        if (se.size() != 1)
            throw std::invalid_argument("--s-end takes one value");
        const EulerTopState st{v[0], {v[1], v[2], v[3]}};
        const Rk4Result r = integrate_rk4(st, se[0], steps);
        auto rep = report("rk4_casimir_drift", "euler-top", {{"s_start", v[0]}, {"s_end", se[0]}}, r.casimir_drift,
                          1e-10);
        rep.metadata["steps"] = std::to_string(steps);
        rep.metadata["drift_constant"] = format_number(r.drift_constant);
        rep.metadata["final_state"] = format_complex(r.state.omega[0]) + "," + format_complex(r.state.omega[1]) +
                                      "," + format_complex(r.state.omega[2]);
        reports.push_back(std::move(rep));
        apply_tolerance(reports, c.tol);
        return finish(c, reports, out);
    }

    // Closed-form nm11 curve between omega = 0.9i and 1.1i.
    const Complex w_start{0.0, 0.9}, w_end{0.0, 1.1};
    std::vector<Complex> path;
    for (int k = 0; k <= 200; ++k)
        path.push_back(w_start + (w_end - w_start) * (k / 200.0));
    const TopCurve curve = nm11_top_curve();
    const std::vector<LabeledValue> point{{"omega_start", w_start}, {"omega_end", w_end}};

    double best_match = std::numeric_limits<double>::infinity();
    Rk4Result best_run;
    std::string best_signs;
    for (int sign_class = 0; sign_class < 2; ++sign_class) {
        auto w = curve.omega(path.front());
        for (auto& z : w)
            z = std::sqrt(z);
        if (sign_class == 1)
            w[2] = -w[2];
        const EulerTopState start{curve.s(path.front()), w};
        for (std::size_t k = 1; k < path.size(); ++k) {
            const auto sq = curve.omega(path[k]);
            for (int i = 0; i < 3; ++i)
                w[i] = sqrt_near(sq[i], w[i]);
        }
        const Rk4Result run = integrate_rk4(start, curve.s(path.back()), steps);
        double d = 0.0;
        for (int i = 0; i < 3; ++i)
            d = std::max(d, std::abs(run.state.omega[i] - w[i]));
        if (d < best_match) {
            best_match = d;
            best_run = run;
            best_signs = sign_class == 0 ? "+++" : "++-";
        }
    }
    auto drift = report("rk4_casimir_drift", "nm11", point, best_run.casimir_drift, 1e-10);
    drift.metadata["steps"] = std::to_string(steps);
    drift.metadata["drift_constant"] = format_number(best_run.drift_constant);
    reports.push_back(std::move(drift));
    auto match = report("rk4_closed_form_match", "nm11", point, best_match, 1e-6);
    match.convention = "perm=(1,2,3);s'=s;signs=" + best_signs;
    reports.push_back(std::move(match));

    std::vector<Complex> grid;
    for (int k = 0; k < 9; ++k)
        grid.push_back(w_start + (w_end - w_start) * (k / 8.0));
    ParametricOptions popt;
    popt.perm_search = c.perm_search == "on";
    popt.contour_radius = 1e-3;
    reports.push_back(parametric_residual(curve, grid, 1e-6, popt, "nm11"));
    apply_tolerance(reports, c.tol);
    return finish(c, reports, out);
}

} // namespace

int run_command(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Frobenius manifold identity checks", "frobkit"};
    app.require_subcommand(1);
    Common common;
    int random_count = 0, param = 2, steps = 1000;
    std::string range, solution = "k3", x_range = "1.5:3.0:50", state, s_end;

    auto* verify = app.add_subcommand("verify", "full identity suite at a point");
    add_common(verify, common);
    verify->add_option("--random", random_count, "also check K random regular points")->check(CLI::NonNegativeNumber);
    auto* frame = app.add_subcommand("frame", "dump the canonical frame");
    add_common(frame, common);
    auto* sweep = app.add_subcommand("sweep", "verify along a grid in one coordinate (CSV)");
    add_common(sweep, common);
    sweep->add_option("--param", param, "1-based coordinate index")->capture_default_str();
    sweep->add_option("--range", range, "a:b:n")->required();
    auto* pvi = app.add_subcommand("pvi", "Painleve VI residual scan");
    add_common(pvi, common);
    pvi->add_option("--solution", solution, "k3, k6, k3-omega or k6-omega")->capture_default_str();
    pvi->add_option("--x-range", x_range, "parameter grid a:b:n")->capture_default_str();
    auto* tau = app.add_subcommand("tau", "tau-function checks (nm11)");
    add_common(tau, common);
    auto* top = app.add_subcommand("top", "Euler top integration and Casimir drift");
    add_common(top, common);
    top->add_option("--state", state, "s,omega1,omega2,omega3 (each x or re:im)");
    top->add_option("--s-end", s_end, "end point of the straight s path");
    top->add_option("--steps", steps, "RK4 steps")->check(CLI::PositiveNumber)->capture_default_str();

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return 0;
    } catch (const CLI::ParseError& e) {
        err << "frobkit: " << e.what() << "\n" << app.help();
        return 2;
    }

    try {
        if (*verify)
            return cmd_verify(common, random_count, out);
        if (*frame)
            return cmd_frame(common, out);
        if (*sweep)
            return cmd_sweep(common, param, range, out, err);
        if (*pvi)
            return cmd_pvi(common, solution, x_range, out);
        if (*tau)
            return cmd_tau(common, out);
        if (*top)
            return cmd_top(common, state, s_end, steps, out);
    } catch (const NumericalError& e) {
        err << "frobkit: degeneracy " << e.what() << "\n";
        return 3;
    } catch (const std::invalid_argument& e) {
        err << "frobkit: " << e.what() << "\n";
        return 2;
    }
    return 2;
}

} // namespace frobkit
