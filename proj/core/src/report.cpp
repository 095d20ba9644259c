#include <charconv>
#include <ostream>
#include <string>

#include <json.hpp>

#include "dvi/error.hpp"
#include "dvi/path.hpp"

namespace dvi {
namespace {

using nlohmann::json;

std::string_view loss_name(LossKind kind) { return kind == LossKind::kHinge ? "hinge" : "absolute"; }

std::string number(double x) {
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, res.ptr);
}

json point_json(const PathPoint& p) {
  return {{"c", p.c},
          {"n_alpha", p.n_alpha},
          {"n_beta", p.n_beta},
          {"rejection_ratio", p.rejection_ratio},
          {"iterations", p.iterations},
          {"converged", p.converged},
          {"objective", p.objective},
          {"screen_seconds", p.screen_seconds},
          {"solve_seconds", p.solve_seconds},
          {"screened", p.screened},
          {"screen_skipped", p.screen_skipped},
          {"violations", p.violations},
          {"w_rel_divergence", p.w_rel_divergence},
          {"released", p.released}};
}

json report_json(const PathReport& r) {
  json j;
  j["schema_version"] = kReportSchemaVersion;
  j["method"] = std::string(to_string(r.method));
  j["loss"] = std::string(loss_name(r.loss));
  j["l"] = r.l;
  j["n"] = r.n;
  j["verified"] = r.verified;
  j["points"] = json::array();
  for (const PathPoint& p : r.points) j["points"].push_back(point_json(p));
  j["totals"] = {{"init_seconds", r.init_seconds},
                 {"screen_seconds", r.screen_seconds},
                 {"solve_seconds", r.solve_seconds},
                 {"total_seconds", r.total_seconds},
                 {"safety_violations", r.safety_violations},
                 {"nonconverged_points", r.nonconverged_points},
                 {"mean_rejection", r.mean_rejection()}};
  if (r.timing) {
    const TimingComparison& t = *r.timing;
    j["timing"] = {{"plain_runs", t.plain_runs},
                   {"screened_runs", t.screened_runs},
                   {"plain_median", t.plain_median},
                   {"screened_median", t.screened_median},
                   {"speedup", t.speedup}};
  }
  if (!r.w.empty()) {
    json w = json::array();
    for (const Eigen::VectorXd& v : r.w) w.push_back(std::vector<double>(v.data(), v.data() + v.size()));
    j["w"] = std::move(w);
  }
  return j;
}

void write_csv(const PathReport& r, std::ostream& out) {
  out << "c,n_alpha,n_beta,rejection_ratio,iterations,converged,objective,screen_seconds,solve_seconds,"
         "screened,screen_skipped,violations,w_rel_divergence,released\n";
  for (const PathPoint& p : r.points) {
    out << number(p.c) << ',' << p.n_alpha << ',' << p.n_beta << ',' << number(p.rejection_ratio) << ','
        << p.iterations << ',' << (p.converged ? 1 : 0) << ',' << number(p.objective) << ','
        << number(p.screen_seconds) << ',' << number(p.solve_seconds) << ',' << (p.screened ? 1 : 0) << ','
        << (p.screen_skipped ? 1 : 0) << ',' << p.violations << ',' << number(p.w_rel_divergence) << ',' << p.released << '\n';
  }
  out << "# schema_version=" << kReportSchemaVersion << '\n'
      << "# method=" << to_string(r.method) << " loss=" << loss_name(r.loss) << " l=" << r.l << " n=" << r.n
      << " verified=" << (r.verified ? 1 : 0) << '\n'
      << "# init_seconds=" << number(r.init_seconds) << " screen_seconds=" << number(r.screen_seconds)
      << " solve_seconds=" << number(r.solve_seconds) << " total_seconds=" << number(r.total_seconds) << '\n'
      << "# safety_violations=" << r.safety_violations << " nonconverged_points=" << r.nonconverged_points
      << " mean_rejection=" << number(r.mean_rejection()) << '\n';
  if (r.timing) {
    out << "# plain_median=" << number(r.timing->plain_median)
        << " screened_median=" << number(r.timing->screened_median)
        << " speedup=" << number(r.timing->speedup) << '\n';
  }
}

}  // namespace

void emit_report(const PathReport& report, ReportFormat format, std::ostream& out) {
  if (format == ReportFormat::kJson) {
    out << report_json(report).dump(2) << '\n';
  } else {
    write_csv(report, out);
  }
  if (!out) throw Error(ErrorCode::kIo, "failed to write report");
}

void emit_comparison(const MethodComparison& cmp, ReportFormat format, std::ostream& out) {
  if (format == ReportFormat::kJson) {
    json j;
    j["schema_version"] = kReportSchemaVersion;
    j["c"] = cmp.c;
    j["methods"] = json::array();
    json rejection = json::object();
    for (std::size_t m = 0; m < cmp.methods.size(); ++m) {
      const std::string name(to_string(cmp.methods[m]));
      j["methods"].push_back(name);
      rejection[name] = cmp.rejection[m];
    }
    j["rejection"] = std::move(rejection);
    if (cmp.dominance_checked) {
      j["dominance"] = {{"holds", cmp.dominance_holds}, {"strict_points", cmp.dominance_strict_points}};
    }
    if (cmp.dvi_equivalence_checked) {
      j["dvi_equivalence"] = {{"disagreements", cmp.dvi_disagreements},
                              {"wide_margin_disagreements", cmp.dvi_disagreements_wide_margin}};
    }
    j["reports"] = json::array();
    for (const PathReport& r : cmp.reports) j["reports"].push_back(report_json(r));
    out << j.dump(2) << '\n';
  } else {
    out << 'c';
    for (Method m : cmp.methods) out << ',' << to_string(m);
    out << '\n';
    for (std::size_t k = 0; k < cmp.c.size(); ++k) {
      out << number(cmp.c[k]);
      for (const auto& column : cmp.rejection) out << ',' << number(column[k]);
      out << '\n';
    }
    out << "# schema_version=" << kReportSchemaVersion << '\n';
    for (const PathReport& r : cmp.reports) {
      out << "# " << to_string(r.method) << " total_seconds=" << number(r.total_seconds)
          << " safety_violations=" << r.safety_violations << " mean_rejection=" << number(r.mean_rejection())
          << '\n';
    }
    if (cmp.dominance_checked) {
      out << "# dominance_holds=" << (cmp.dominance_holds ? 1 : 0)
          << " strict_points=" << cmp.dominance_strict_points << '\n';
    }
    if (cmp.dvi_equivalence_checked) {
      out << "# dvi_disagreements=" << cmp.dvi_disagreements
          << " wide_margin=" << cmp.dvi_disagreements_wide_margin << '\n';
    }
  }
  if (!out) throw Error(ErrorCode::kIo, "failed to write comparison");
}

}  // namespace dvi
