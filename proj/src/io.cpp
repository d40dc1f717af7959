#include "ima/io.hpp"

#include "ima/error.hpp"

#include <charconv>
#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>
#include <string_view>

namespace ima {

namespace {

std::string_view trim(std::string_view s) {
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string_view::npos) return {};
    const auto last = s.find_last_not_of(" \t\r");
    return s.substr(first, last - first + 1);
}

bool parse_number(std::string_view text, double& out) {
    text = trim(text);
    if (!text.empty() && text.front() == '+') text.remove_prefix(1);
    const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), out);
    return ec == std::errc() && ptr == text.data() + text.size() && std::isfinite(out);
}

[[noreturn]] void parse_error(std::size_t line, const std::string& what) {
    throw Error(ErrorKind::ParseError, "line " + std::to_string(line) + ": " + what);
}

std::string fmt(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

nlohmann::json optional_number(const std::optional<double>& v) {
    return v ? nlohmann::json(*v) : nlohmann::json(nullptr);
}

}  // namespace

TimeSeries read_series_csv(std::istream& in) {
    std::string line;
    std::size_t line_no = 0;
    bool header_seen = false;
    std::vector<double> times;
    std::vector<double> values;
    while (std::getline(in, line)) {
        ++line_no;
        std::string_view text = trim(line);
        if (line_no == 1 && text.starts_with("\xEF\xBB\xBF")) text.remove_prefix(3);
        if (text.empty()) continue;
        if (!header_seen) {
            const auto comma = text.find(',');
            if (comma == std::string_view::npos || trim(text.substr(0, comma)) != "time" ||
                trim(text.substr(comma + 1)) != "value") {
                parse_error(line_no, "expected header 'time,value'");
            }
            header_seen = true;
            continue;
        }
        const auto comma = text.find(',');
        if (comma == std::string_view::npos || text.find(',', comma + 1) != std::string_view::npos) {
            parse_error(line_no, "expected two comma-separated fields");
        }
        double t = 0.0;
        double v = 0.0;
        if (!parse_number(text.substr(0, comma), t)) parse_error(line_no, "time is not a finite number");
        if (!parse_number(text.substr(comma + 1), v)) parse_error(line_no, "value is not a finite number");
        if (!times.empty() && !(t > times.back())) {
            throw Error(ErrorKind::InvalidTimes, "line " + std::to_string(line_no) + ": time " + fmt(t) +
                                                     " does not increase (row " +
                                                     std::to_string(times.size() + 1) + ")");
        }
        times.push_back(t);
        values.push_back(v);
    }
    if (!header_seen) parse_error(line_no + 1, "missing header 'time,value'");
    if (times.empty()) parse_error(line_no + 1, "no observations");
    return TimeSeries(TimeGrid::from_times(times), std::move(values));
}

TimeSeries read_series_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error(ErrorKind::IoError, "cannot open '" + path + "'");
    return read_series_csv(in);
}

void write_series_csv(std::ostream& out, const TimeSeries& series) {
    out << "time,value\n";
    const auto t = series.grid().times();
    const auto x = series.values();
    for (std::size_t i = 0; i < x.size(); ++i) out << fmt(t[i]) << ',' << fmt(x[i]) << '\n';
}

void write_prediction_csv(std::ostream& out, const TimeSeries& series, const PredictionOutput& p) {
    out << "time,x,xhat,mse,innovation,std_innovation\n";
    const auto t = series.grid().times();
    const auto x = series.values();
    for (std::size_t i = 0; i < x.size(); ++i) {
        out << fmt(t[i]) << ',' << fmt(x[i]) << ',' << fmt(p.predictors[i]) << ',' << fmt(p.mse[i]) << ','
            << fmt(p.innovations[i]) << ',' << fmt(p.standardized[i]) << '\n';
    }
}

nlohmann::json to_json(const TimeGrid& grid) {
    return {{"times", std::vector<double>(grid.times().begin(), grid.times().end())},
            {"gaps", std::vector<double>(grid.gaps().begin(), grid.gaps().end())},
            {"scale", grid.scale()}};
}

nlohmann::json to_json(const PredictionOutput& p) {
    return {{"predictors", p.predictors},
            {"mse", p.mse},
            {"innovations", p.innovations},
            {"standardized", p.standardized}};
}

nlohmann::json to_json(const FitResult& fit) {
    return {{"theta_hat", fit.theta_hat},   {"sigma2_hat", fit.sigma2_hat},
            {"mu", fit.mu},                 {"se_theta", optional_number(fit.se_theta)},
            {"se_sigma2", optional_number(fit.se_sigma2)}, {"loglik", fit.loglik},
            {"q_value", fit.q_value},       {"iterations", fit.iterations},
            {"n_obs", fit.n_obs},           {"converged", fit.converged},
            {"boundary_hit", fit.boundary_hit}, {"se_reliable", fit.se_reliable}};
}

nlohmann::json to_json(const BootstrapResult& r, bool include_replicates) {
    nlohmann::json intervals = nlohmann::json::array();
    for (const auto& iv : r.intervals) {
        intervals.push_back({{"level", iv.level},
                             {"theta", {iv.theta_lo, iv.theta_hi}},
                             {"sigma2", {iv.sigma2_lo, iv.sigma2_hi}}});
    }
    nlohmann::json j = {{"fit", to_json(r.original)},
                        {"replicates", r.requested},
                        {"failures", r.failures},
                        {"theta_b", r.theta_b},
                        {"se_theta_b", r.se_theta_b},
                        {"sigma2_b", r.sigma2_b},
                        {"se_sigma2_b", r.se_sigma2_b},
                        {"intervals", intervals}};
    if (include_replicates) {
        j["replicate_thetas"] = r.replicate_thetas;
        j["replicate_sigma2s"] = r.replicate_sigma2s;
    }
    return j;
}

nlohmann::json to_json(const DiagnosticsReport& r) {
    nlohmann::json lb = nlohmann::json::array();
    for (const auto& row : r.ljung_box) {
        lb.push_back({{"lag", row.lag}, {"q", row.q}, {"df", row.df}, {"p_value", row.p_value}});
    }
    return {{"fit", to_json(r.fit)},
            {"acf", r.acf},
            {"acf_band", r.acf_band},
            {"ljung_box", lb},
            {"qq", {{"theoretical", r.qq.theoretical}, {"empirical", r.qq.empirical},
                    {"lower", r.qq.lower}, {"upper", r.qq.upper}}},
            {"mse", {{"ima", r.mse.mse_ima}, {"ma", r.mse.mse_ma}, {"mean_ima", r.mse.mean_ima},
                     {"mean_ma", r.mse.mean_ma}, {"fit_ma", to_json(r.mse.fit_ma)}}}};
}

nlohmann::json to_json(const McReport& r) {
    nlohmann::json j = {{"n_obs", r.n_obs},
                        {"theta0", r.theta0},
                        {"estimator", r.estimator == Estimator::Mle ? "mle" : "bootstrap"},
                        {"mean_estimate", r.mean_estimate},
                        {"mean_se", r.mean_se},
                        {"empirical_se", r.empirical_se},
                        {"bias", r.bias},
                        {"rmse", r.rmse},
                        {"cv", optional_number(r.cv)},
                        {"mce", r.mce},
                        {"requested", r.requested},
                        {"used", r.used},
                        {"failures", r.failures},
                        {"se_missing", r.se_missing}};
    if (!r.records.empty()) {
        nlohmann::json records = nlohmann::json::array();
        for (const auto& rec : r.records) records.push_back({{"estimate", rec.estimate}, {"se", optional_number(rec.se)}});
        j["records"] = records;
    }
    return j;
}

FitResult fit_from_json(const nlohmann::json& j) {
    try {
        FitResult fit;
        fit.theta_hat = j.at("theta_hat").get<double>();
        fit.sigma2_hat = j.at("sigma2_hat").get<double>();
        fit.mu = j.at("mu").get<double>();
        if (j.contains("se_theta") && !j["se_theta"].is_null()) fit.se_theta = j["se_theta"].get<double>();
        if (j.contains("se_sigma2") && !j["se_sigma2"].is_null()) fit.se_sigma2 = j["se_sigma2"].get<double>();
        fit.loglik = j.value("loglik", 0.0);
        fit.q_value = j.value("q_value", 0.0);
        fit.iterations = j.value("iterations", std::size_t{0});
        fit.n_obs = j.value("n_obs", std::size_t{0});
        fit.converged = j.value("converged", false);
        fit.boundary_hit = j.value("boundary_hit", false);
        fit.se_reliable = j.value("se_reliable", false);
        fit.params().validate();
        return fit;
    } catch (const nlohmann::json::exception& e) {
        throw Error(ErrorKind::ParseError, std::string("fit report: ") + e.what());
    } catch (const Error& e) {
        throw Error(ErrorKind::ParseError, std::string("fit report: ") + e.what());
    }
}

}  // namespace ima
