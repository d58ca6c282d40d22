#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include "ttm/analysis.hpp"
#include "ttm/engine.hpp"
#include "ttm/io.hpp"
#include "ttm/metric.hpp"
#include "ttm/model.hpp"

namespace {

// exit codes: 0 ok, 1 parse/IO, 2 validation, 3 axiom violation,
// 4 existence failure under removal
constexpr int kExitOk = 0;
constexpr int kExitParse = 1;
constexpr int kExitValidation = 2;
constexpr int kExitAxioms = 3;
constexpr int kExitExistence = 4;

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ttm::parse_error("cannot open '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

ttm::Network load(const std::string& path) {
  return ttm::load_network(read_file(path));
}

ttm::Network load_valid(const std::string& path) {
  ttm::Network net = load(path);
  ttm::ValidationReport report = ttm::validate_network(net);
  if (!report.ok)
    throw ttm::validation_error("network '" + path + "' is not consistent",
                                std::move(report));
  return net;
}

void emit(const std::string& text, const std::string& out_file) {
  if (out_file.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream out(out_file, std::ios::binary);
  if (!out) throw ttm::parse_error("cannot write '" + out_file + "'");
  out << text;
}

std::string axiom_summary(const ttm::AxiomReport& report,
                          const ttm::MetricMatrix& m) {
  auto id = [&](std::uint32_t i) { return m.locations[i].id; };
  std::ostringstream out;
  out << "axioms:\n";
  auto pair_line = [&](const char* name,
                       const ttm::AxiomReport::PairSection& s) {
    out << "  " << name << ": " << (s.pass ? "pass" : "FAIL");
    if (!s.pass) {
      const ttm::PairWitness& w = s.witnesses.front();
      out << " (" << s.witnesses.size() << " witnesses; e.g. (" << id(w.a)
          << "," << id(w.b) << "): " << ttm::to_string(w.lhs) << " vs "
          << ttm::to_string(w.rhs) << ")";
    }
    out << "\n";
  };
  pair_line("non-negativity", report.non_negativity);
  pair_line("identity", report.identity_of_indiscernibles);
  pair_line("symmetry", report.symmetry);
  out << "  triangle: " << (report.triangle.pass ? "pass" : "FAIL");
  if (!report.triangle.pass) {
    const ttm::TriangleWitness& w = report.triangle.witnesses.front();
    out << " (" << report.triangle.witnesses.size() << " witnesses; e.g. ("
        << id(w.a) << "," << id(w.b) << "," << id(w.c)
        << "): " << ttm::to_string(w.lhs) << " > " << ttm::to_string(w.rhs)
        << ")";
  }
  out << "\n";
  return out.str();
}

std::string matrix_block(const ttm::MetricMatrix& m, const std::string& format) {
  std::ostringstream out;
  out << "# " << ttm::to_string(m.aggregator)
      << " regularized=" << (m.regularized ? "true" : "false") << " period=["
      << ttm::to_string(m.period.start) << "," << ttm::to_string(m.period.end)
      << "] unit=" << m.unit << "\n";
  out << ttm::write_matrix(m, format == "json" ? ttm::MatrixFormat::JSONDocument
                                               : ttm::MatrixFormat::CSV);
  return out.str();
}

struct DemoCheck {
  bool ok = true;
  std::ostringstream out;

  void value(const std::string& label, ttm::Duration computed,
             ttm::Duration expected) {
    bool match = computed == expected;
    ok = ok && match;
    out << "  " << label << " = " << ttm::to_string(computed) << " (expected "
        << ttm::to_string(expected) << (match ? ")" : ") MISMATCH") << "\n";
  }
  void flag(const std::string& label, bool computed, bool expected) {
    bool match = computed == expected;
    ok = ok && match;
    out << "  " << label << ": " << (computed ? "yes" : "no") << " (expected "
        << (expected ? "yes" : "no") << (match ? ")" : ") MISMATCH") << "\n";
  }
};

ttm::Duration ticks(std::int64_t t) { return ttm::Duration::from_input_ticks(t); }

int run_demo_minmin(const std::string& out_file) {
  ttm::Network net = ttm::builtin_example(ttm::BuiltinExample::MinMinCounterexample);
  ttm::SearchPolicy policy = ttm::SearchPolicy::for_network(net);
  auto a = *net.find_location("a");
  auto b = *net.find_location("b");
  auto c = *net.find_location("c");

  DemoCheck check;
  check.out << "min-min aggregate (rejected: minima need not compose):\n";
  ttm::MetricMatrix minmin = ttm::minmin_aggregate(net, policy);
  check.value("T(a,b)", minmin.at(a, b), ticks(10));
  check.value("T(b,c)", minmin.at(b, c), ticks(10));
  check.value("T(a,c)", minmin.at(a, c), ticks(45));
  ttm::AxiomReport minmin_axioms = ttm::verify_metric_axioms(minmin);
  check.flag("triangle violated", !minmin_axioms.triangle.pass, true);
  if (!minmin_axioms.triangle.pass) {
    const ttm::TriangleWitness& w = minmin_axioms.triangle.witnesses.front();
    check.out << "  witness (" << minmin.locations[w.a].id << ","
              << minmin.locations[w.b].id << "," << minmin.locations[w.c].id
              << "): " << ttm::to_string(w.lhs) << " > "
              << ttm::to_string(w.rhs) << "\n";
  }

  check.out << "max-min metric:\n";
  ttm::MetricMatrix maxmin = ttm::maxmin_metric(ttm::regularize(net), policy);
  check.value("T(a,b)", maxmin.at(a, b), ticks(60));
  check.value("T(b,c)", maxmin.at(b, c), ticks(60));
  check.value("T(a,c)", maxmin.at(a, c), ticks(45));
  check.flag("all axioms pass", ttm::verify_metric_axioms(maxmin).all_pass(), true);

  emit(check.out.str(), out_file);
  return check.ok ? kExitOk : kExitParse;
}

int run_demo_boundary(const std::string& out_file) {
  ttm::Network net = ttm::builtin_example(ttm::BuiltinExample::BoundaryExample);
  ttm::SearchPolicy policy = ttm::SearchPolicy::for_network(net);
  auto a = *net.find_location("a");
  auto b = *net.find_location("b");
  auto c = *net.find_location("c");

  DemoCheck check;
  check.out << "unregularized directed worst-case values:\n";
  check.value("T_U(a,b)", ttm::directed_worst_best(net, a, b, policy), ticks(30));
  check.value("T_U(b,c)", ttm::directed_worst_best(net, b, c, policy), ticks(30));
  check.value("T_U(a,c)", ttm::directed_worst_best(net, a, c, policy), ticks(120));
  ttm::MetricMatrix raw = ttm::maxmin_metric(net, policy);
  check.flag("triangle violated", !ttm::verify_metric_axioms(raw).triangle.pass,
             true);

  ttm::EpsilonChoice eps = ttm::compute_epsilon(net);
  check.value("epsilon (half the shortest stored duration)", eps.value,
              ttm::Duration::from_half_ticks(30));
  ttm::Network reg = ttm::regularize(net, eps);
  check.out << "after boundary regularization:\n";
  ttm::MetricMatrix metric = ttm::maxmin_metric(reg, policy);
  check.value("T(a,b)", metric.at(a, b), ticks(30));
  check.value("T(b,c)", metric.at(b, c), ticks(30));
  check.value("T(a,c)", metric.at(a, c), ticks(60));
  check.flag("all axioms pass", ttm::verify_metric_axioms(metric).all_pass(),
             true);

  emit(check.out.str(), out_file);
  return check.ok ? kExitOk : kExitParse;
}

int run_demo_integral(const std::string& out_file) {
  ttm::Network net = ttm::construct_integral_violation();
  ttm::SearchPolicy policy = ttm::SearchPolicy::for_network(net);
  auto a = *net.find_location("a");
  auto b = *net.find_location("b");
  auto c = *net.find_location("c");

  DemoCheck check;
  check.out << "uniform integral aggregate (rejected: any monotone "
               "second leg breaks it):\n";
  ttm::MetricMatrix integral = ttm::integral_aggregate(net, policy);
  check.value("T_I(a,b)", integral.at(a, b), ticks(10));
  check.value("T_I(b,c)", integral.at(b, c), ticks(60));
  check.value("T_I(a,c)", integral.at(a, c), ticks(80));
  ttm::AxiomReport axioms = ttm::verify_metric_axioms(integral);
  check.flag("triangle violated", !axioms.triangle.pass, true);
  if (!axioms.triangle.pass) {
    const ttm::TriangleWitness& w = axioms.triangle.witnesses.front();
    check.out << "  witness (" << integral.locations[w.a].id << ","
              << integral.locations[w.b].id << "," << integral.locations[w.c].id
              << "): " << ttm::to_string(w.lhs) << " > "
              << ttm::to_string(w.rhs) << "\n";
  }

  check.out << "max-min metric on the same network:\n";
  check.flag("all axioms pass",
             ttm::verify_metric_axioms(
                 ttm::maxmin_metric(ttm::regularize(net), policy))
                 .all_pass(),
             true);

  emit(check.out.str(), out_file);
  return check.ok ? kExitOk : kExitParse;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"travel-time metric toolkit"};
  app.require_subcommand(1);

  std::string net_path;
  std::string out_file;
  int jobs = 1;

  auto* validate = app.add_subcommand("validate", "check the consistency requirements");
  validate->add_option("net", net_path, "network document")->required();
  validate->add_option("--out-file", out_file, "write output to a file");

  std::string tt_from, tt_to;
  std::int64_t tt_depart = 0;
  bool tt_no_wait = false;
  auto* tt = app.add_subcommand("tt", "best travel time for one departure");
  tt->add_option("net", net_path)->required();
  tt->add_option("--from", tt_from, "origin location id")->required();
  tt->add_option("--to", tt_to, "destination location id")->required();
  tt->add_option("--depart", tt_depart, "departure tick")->required();
  tt->add_flag("--no-wait", tt_no_wait, "forbid waiting between legs");
  tt->add_option("--out-file", out_file);

  bool no_regularize = false;
  std::string aggregator = "maxmin";
  std::string out_format = "csv";
  auto* metric = app.add_subcommand("metric", "aggregated matrix plus axiom report");
  metric->add_option("net", net_path)->required();
  metric->add_flag("--no-regularize", no_regularize,
                   "skip boundary regularization (reproduces the boundary failure)");
  metric->add_option("--aggregator", aggregator)
      ->check(CLI::IsMember({"maxmin", "minmin", "integral"}));
  metric->add_option("--out", out_format)->check(CLI::IsMember({"csv", "json"}));
  metric->add_option("--jobs", jobs, "worker threads");
  metric->add_option("--out-file", out_file);

  auto* compare = app.add_subcommand("compare-aggregators",
                                     "maxmin vs minmin vs integral side by side");
  compare->add_option("net", net_path)->required();
  compare->add_option("--jobs", jobs);
  compare->add_option("--out-file", out_file);

  auto* stability = app.add_subcommand("stability",
                                       "metric with the fastest walk excluded");
  stability->add_option("net", net_path)->required();
  stability->add_option("--jobs", jobs);
  stability->add_option("--out-file", out_file);

  std::string scenario_path;
  auto* capacity = app.add_subcommand("capacity", "metric under a traffic scenario");
  capacity->add_option("net", net_path)->required();
  capacity->add_option("--scenario", scenario_path, "scenario document")->required();
  capacity->add_option("--jobs", jobs);
  capacity->add_option("--out-file", out_file);

  std::int64_t window = 0, stride = 0;
  auto* rolling = app.add_subcommand("rolling", "one metric per rolling window");
  rolling->add_option("net", net_path)->required();
  rolling->add_option("--window", window, "window length in ticks")->required();
  rolling->add_option("--stride", stride, "stride in ticks")->required();
  rolling->add_option("--jobs", jobs);
  rolling->add_option("--out-file", out_file);

  std::string demo_name;
  auto* demo = app.add_subcommand("demo", "run a built-in worked example");
  demo->add_option("example", demo_name, "minmin | boundary | integral")
      ->required()
      ->check(CLI::IsMember({"minmin", "boundary", "integral"}));
  demo->add_option("--out-file", out_file);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);  // --help
    std::cerr << e.what() << "\n";
    return kExitParse;
  }

  try {
    if (*validate) {
      ttm::Network net = load(net_path);
      ttm::ValidationReport report = ttm::validate_network(net);
      emit(ttm::validation_report_json(report), out_file);
      return report.ok ? kExitOk : kExitValidation;
    }

    if (*tt) {
      ttm::Network net = load_valid(net_path);
      auto from = net.find_location(tt_from);
      if (!from) throw ttm::parse_error("unknown location '" + tt_from + "'");
      auto to = net.find_location(tt_to);
      if (!to) throw ttm::parse_error("unknown location '" + tt_to + "'");
      ttm::SearchPolicy policy = ttm::SearchPolicy::for_network(net);
      if (tt_no_wait) policy.waiting = ttm::WaitingPolicy::NoWaiting;
      ttm::TimePoint depart = ttm::TimePoint::from_input_ticks(tt_depart);
      ttm::ArrivalLabels labels = ttm::earliest_arrival(net, *from, depart, policy);

      std::ostringstream out;
      ttm::TimePoint arrival = labels.arrivals[*to];
      if (arrival.is_infinite()) {
        out << "T(" << tt_from << ", " << tt_to << ", " << ttm::to_string(depart)
            << ") = inf (no admissible route)\n";
      } else {
        out << "T(" << tt_from << ", " << tt_to << ", " << ttm::to_string(depart)
            << ") = " << ttm::to_string(arrival - depart) << "\n";
        ttm::TimePoint at = depart;
        for (const ttm::WalkStep& step : labels.walks[*to]) {
          const ttm::RouteSegment& seg = net.segments()[step.segment];
          out << "  ";
          if (step.board > at)
            out << "wait " << ttm::to_string(step.board - at) << ", then ";
          out << seg.id << ": " << net.locations()[seg.from].id << " -> "
              << net.locations()[seg.to].id << ", board "
              << ttm::to_string(step.board) << ", duration "
              << ttm::to_string(step.arrival - step.board) << ", arrive "
              << ttm::to_string(step.arrival) << "\n";
          at = step.arrival;
        }
      }
      emit(out.str(), out_file);
      return kExitOk;
    }

    if (*metric) {
      ttm::Network net = load_valid(net_path);
      ttm::SearchPolicy policy = ttm::SearchPolicy::for_network(net);
      ttm::MetricMatrix m;
      if (aggregator == "maxmin") {
        if (!no_regularize && !net.regularized()) net = ttm::regularize(net);
        m = ttm::maxmin_metric(net, policy, jobs);
      } else if (aggregator == "minmin") {
        m = ttm::minmin_aggregate(net, policy, jobs);
      } else {
        m = ttm::integral_aggregate(net, policy, jobs);
      }
      ttm::AxiomReport axioms = ttm::verify_metric_axioms(m);
      emit(matrix_block(m, out_format) + axiom_summary(axioms, m), out_file);
      return axioms.all_pass() ? kExitOk : kExitAxioms;
    }

    if (*compare) {
      ttm::Network net = load_valid(net_path);
      ttm::SearchPolicy policy = ttm::SearchPolicy::for_network(net);
      ttm::Network reg = net.regularized() ? net : ttm::regularize(net);
      std::ostringstream out;
      ttm::MetricMatrix maxmin = ttm::maxmin_metric(reg, policy, jobs);
      out << matrix_block(maxmin, out_format)
          << axiom_summary(ttm::verify_metric_axioms(maxmin), maxmin);
      ttm::MetricMatrix minmin = ttm::minmin_aggregate(net, policy, jobs);
      out << matrix_block(minmin, out_format)
          << axiom_summary(ttm::verify_metric_axioms(minmin), minmin);
      ttm::MetricMatrix integral = ttm::integral_aggregate(net, policy, jobs);
      out << matrix_block(integral, out_format)
          << axiom_summary(ttm::verify_metric_axioms(integral), integral);
      emit(out.str(), out_file);
      return kExitOk;
    }

    if (*stability) {
      ttm::Network net = load_valid(net_path);
      if (!net.regularized()) net = ttm::regularize(net);
      ttm::StabilityReport report = ttm::stability_metric(net, jobs);
      std::ostringstream out;
      out << "# baseline\n" << ttm::write_matrix(report.baseline, ttm::MatrixFormat::CSV);
      out << "# excluded\n" << ttm::write_matrix(report.excluded, ttm::MatrixFormat::CSV);
      out << "# delta\n";
      for (std::size_t a = 0; a < report.baseline.size(); ++a) {
        for (std::size_t b = 0; b < report.baseline.size(); ++b)
          out << (b ? "," : "") << ttm::to_string(report.delta_at(a, b));
        out << "\n";
      }
      out << "# flagged cells: " << report.flagged.size() << "\n";
      for (const auto& cell : report.flagged)
        out << "#   (" << report.baseline.locations[cell.from].id << ","
            << report.baseline.locations[cell.to].id << ") depart "
            << ttm::to_string(cell.depart) << "\n";
      emit(out.str(), out_file);
      return kExitOk;
    }

    if (*capacity) {
      ttm::Network net = load_valid(net_path);
      ttm::CapacityScenario scenario = ttm::load_scenario(read_file(scenario_path));
      ttm::MetricMatrix m = ttm::capacity_scenario(net, scenario, jobs);
      ttm::AxiomReport axioms = ttm::verify_metric_axioms(m);
      emit(matrix_block(m, out_format) + axiom_summary(axioms, m), out_file);
      return axioms.all_pass() ? kExitOk : kExitAxioms;
    }

    if (*rolling) {
      ttm::Network net = load_valid(net_path);
      ttm::RollingSpec spec{ttm::Duration::from_input_ticks(window),
                            ttm::Duration::from_input_ticks(stride)};
      auto series = ttm::rolling_metrics(net, spec, jobs);
      std::ostringstream out;
      for (const auto& [end, m] : series) {
        out << "# window end=" << ttm::to_string(end) << " period=["
            << ttm::to_string(m.period.start) << ","
            << ttm::to_string(m.period.end) << "]\n";
        out << ttm::write_matrix(m, ttm::MatrixFormat::CSV);
      }
      emit(out.str(), out_file);
      return kExitOk;
    }

    if (*demo) {
      if (demo_name == "minmin") return run_demo_minmin(out_file);
      if (demo_name == "boundary") return run_demo_boundary(out_file);
      return run_demo_integral(out_file);
    }
  } catch (const ttm::existence_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    std::cerr << ttm::validation_report_json(e.report);
    return kExitExistence;
  } catch (const ttm::validation_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    std::cerr << ttm::validation_report_json(e.report);
    return kExitValidation;
  } catch (const ttm::parse_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitParse;
  } catch (const ttm::domain_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitParse;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitParse;
  }
  return kExitOk;
}
