#include <cstdio>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "incmax/continuous.hpp"
#include "incmax/io.hpp"
#include "incmax/lower_bounds.hpp"
#include "incmax/oracle.hpp"
#include "incmax/randomized.hpp"
#include "incmax/separable.hpp"
#include "incmax/yao.hpp"

using namespace incmax;

namespace {

constexpr int kOk = 0;
constexpr int kUsage = 1;
constexpr int kVerifyFailed = 2;

// Artifact goes to --out when given, otherwise to stdout; the summary line always goes to stderr.
struct Sink {
  std::string path;
  std::ostringstream buffer;

  void flush() {
    if (path.empty()) {
      std::cout << buffer.str();
      return;
    }
    std::ofstream f(path);
    if (!f) throw Error("IoError", "cannot write " + path);
    f << buffer.str();
  }
};

void summary(const std::string& line) { std::cerr << line << '\n'; }

PiecewiseLinear<double> load_piecewise(const std::string& path) {
  if (path.empty()) return identity_value<double>();
  return piecewise_from_json<double>(read_json_file(path));
}

std::string join(const std::vector<double>& xs) {
  std::string s;
  for (std::size_t i = 0; i < xs.size(); ++i) s += (i ? "," : "") + format_double(xs[i]);
  return s;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Incremental maximization laboratory"};
  app.require_subcommand(1);
  Sink sink;
  int status = kOk;
  std::function<void()> action;
  auto out_option = [&sink](CLI::App* cmd) { cmd->add_option("--out", sink.path, "artifact file (default stdout)"); };

  // greedy
  std::string instance_path;
  double rho = 0, c1 = 0, horizon = 1e6;
  auto* greedy = app.add_subcommand("greedy", "trace greedy scaling and check competitiveness");
  greedy->add_option("--instance", instance_path, "piecewise-linear instance JSON (default v(c) = c)");
  greedy->add_option("--rho", rho, "target ratio")->required()->check(CLI::PositiveNumber);
  greedy->add_option("--c1", c1, "starting size")->required()->check(CLI::PositiveNumber);
  greedy->add_option("--horizon", horizon, "stop once the covered range passes this size");
  out_option(greedy);
  greedy->callback([&] {
    action = [&] {
      auto f = load_piecewise(instance_path);
      GreedyOptions<double> opts;
      opts.horizon = horizon;
      auto run = greedy_scaling(f, c1, rho, opts);
      auto verdict = check_competitive(f, run.sizes, rho);
      write_greedy_csv(sink.buffer, run.trace);
      summary("greedy: " + std::to_string(run.sizes.size()) + " blocks, " + to_string(run.status) + ", " +
              (verdict.ok ? "competitive" : "not competitive (" + verdict.condition + ")"));
      status = verdict.ok ? kOk : kVerifyFailed;
    };
  });

  // check
  std::vector<double> sizes;
  auto* check = app.add_subcommand("check", "check a block sequence against the competitiveness conditions");
  check->add_option("--instance", instance_path, "piecewise-linear instance JSON (default v(c) = c)");
  check->add_option("--rho", rho, "target ratio")->required()->check(CLI::PositiveNumber);
  check->add_option("--sizes", sizes, "block sizes")->required()->delimiter(',');
  out_option(check);
  check->callback([&] {
    action = [&] {
      auto verdict = check_competitive(load_piecewise(instance_path), sizes, rho);
      json doc{{"ok", verdict.ok}, {"first_violation", verdict.first_violation}, {"condition", verdict.condition}};
      doc["covered_until"] = verdict.covered_until ? json(*verdict.covered_until) : json(nullptr);
      sink.buffer << doc.dump(2) << '\n';
      summary(std::string("check: ") + (verdict.ok ? "competitive" : "violated " + verdict.condition + " at block " +
                                                                          std::to_string(verdict.first_violation)));
      status = verdict.ok ? kOk : kVerifyFailed;
    };
  });

  // exclude
  std::vector<double> starts;
  std::optional<double> eps;
  auto* exclude = app.add_subcommand("exclude", "extend an instance so greedy scaling fails from given starts");
  exclude->add_option("--instance", instance_path, "base instance JSON (default geometric tilted identity)");
  exclude->add_option("--rho", rho, "ratio in (1, phi+1)")->required();
  exclude->add_option("--starts", starts, "sorted starting sizes")->required()->delimiter(',');
  exclude->add_option("--eps", eps, "fixed epsilon instead of the halving schedule");
  out_option(exclude);
  exclude->callback([&] {
    action = [&] {
      auto base = instance_path.empty() ? tilted_identity() : load_piecewise(instance_path);
      auto chain = chain_exclusions(base, starts, rho, eps);
      int defeated = 0;
      for (double s : starts) {
        GreedyOptions<double> opts;
        opts.horizon = 1e300;
        defeated += greedy_scaling(chain.instance, s, rho, opts).status == GreedyStatus::NotCompetitive;
      }
      json doc = to_json(chain.instance);
      doc["safe_extension"] = chain.safe_extension;
      sink.buffer << doc.dump(2) << '\n';
      summary("exclude: defeated " + std::to_string(defeated) + "/" + std::to_string(starts.size()) +
              " starts, modifiable from " + format_double(chain.safe_extension));
      status = defeated == static_cast<int>(starts.size()) ? kOk : kVerifyFailed;
    };
  });

  // detlb
  auto* detlb = app.add_subcommand("detlb", "build and certify the deterministic lower-bound instance");
  detlb->add_option("--rho", rho, "ratio in (1, rho*)")->required();
  detlb->add_option("--eps", eps, "fixed epsilon instead of the halving schedule");
  out_option(detlb);
  detlb->callback([&] {
    action = [&] {
      auto lb = build_det_lb_instance(rho, eps);
      auto cert = certify_no_solution(lb.instance, lb.rho, lb.epsilon, lb.t, lb.ell);
      json doc = certificate_json(lb, cert);
      doc["instance"] = to_json(lb.instance);
      sink.buffer << doc.dump(2) << '\n';
      summary("detlb: " + std::to_string(cert.candidates_checked) + " candidates, " +
              (cert.infeasible ? "no competitive solution" : "found competitive solution " + join(cert.feasible_sizes)));
      status = cert.infeasible ? kOk : kVerifyFailed;
    };
  });

  // roots
  std::optional<double> probe;
  auto* roots = app.add_subcommand("roots", "thresholds and characteristic discriminants");
  roots->add_option("--rho", probe, "also report discriminants at this ratio");
  out_option(roots);
  roots->callback([&] {
    action = [&] {
      const double rs = rho_star();
      json doc{{"phi_plus_one", kPhiPlusOne},
               {"rho_star", rs},
               {"threshold_residual", threshold_polynomial(rs)},
               {"discriminant_a_at_phi_plus_one", discriminant_a_at_zero(kPhiPlusOne)}};
      if (probe) {
        doc["rho"] = *probe;
        doc["discriminant_a"] = discriminant_a_at_zero(*probe);
        doc["discriminant_b"] = discriminant_b_at_zero(*probe);
      }
      sink.buffer << doc.dump(2) << '\n';
      summary("roots: phi+1 = " + format_double(kPhiPlusOne) + ", rho* = " + format_double(rs));
    };
  });

  // rand
  auto* rand = app.add_subcommand("rand", "randomized scaling");
  rand->require_subcommand(1);
  double r = 0;
  long from = 1, to = 0;
  auto* expectation = rand->add_subcommand("expectation", "expected-ratio lower bound for small sizes");
  expectation->add_option("--r", r, "scaling base (default the maximizer of g)");
  expectation->add_option("--from", from, "first size");
  expectation->add_option("--to", to, "last size (default floor(1+r+r^2+r^3))");
  out_option(expectation);
  expectation->callback([&] {
    action = [&] {
      if (r == 0) r = optimal_r();
      if (to == 0) to = smallC_limit(r);
      CsvWriter csv(sink.buffer, {"C", "expected_ratio_lower_bound"});
      double lo = 1e300;
      for (long C = from; C <= to; ++C) {
        double v = expected_ratio_lb_smallC(C, r);
        lo = std::min(lo, v);
        csv.row({std::to_string(C), format_double(v)});
      }
      summary("rand expectation: r = " + format_double(r) + ", minimum " + format_double(lo));
    };
  });
  int k_from = 3, k_to = 12;
  double delta_step = 0.05;
  auto* bound = rand->add_subcommand("bound", "integral bound over a (k, delta) grid");
  bound->add_option("--r", r, "scaling base (default the maximizer of g)");
  bound->add_option("--k-from", k_from, "first k");
  bound->add_option("--k-to", k_to, "last k");
  bound->add_option("--delta-step", delta_step, "delta grid spacing")->check(CLI::PositiveNumber);
  out_option(bound);
  bound->callback([&] {
    action = [&] {
      if (r == 0) r = optimal_r();
      const double g = g_of(r);
      CsvWriter csv(sink.buffer, {"k", "delta", "I", "g"});
      bool holds = true;
      int skipped = 0;
      const int steps = static_cast<int>(std::lround(1 / delta_step));
      for (int k = k_from; k <= k_to; ++k)
        for (int j = 1; j <= steps; ++j) {
          const double delta = j * delta_step;
          try {
            auto env = integral_bound(k, delta, r);
            holds = holds && env.integral_value >= g - 1e-6;
            csv.row({std::to_string(k), format_double(delta), format_double(env.integral_value), format_double(g)});
          } catch (const Error& e) {
            if (e.code() != "HypothesisViolated") throw;
            ++skipped;
          }
        }
      summary(std::string("rand bound: ") + (holds ? "I >= g" : "I < g somewhere") + " on the grid, " +
              std::to_string(skipped) + " points outside the hypothesis");
      status = holds ? kOk : kVerifyFailed;
    };
  });
  std::uint64_t seed = 1;
  auto* rrun = rand->add_subcommand("run", "block sizes of one randomized run");
  rrun->add_option("--instance", instance_path, "separable instance JSON")->required();
  rrun->add_option("--seed", seed, "random seed");
  rrun->add_option("--r", r, "scaling base (default the maximizer of g)");
  out_option(rrun);
  rrun->callback([&] {
    action = [&] {
      auto inst = separable_from_json(read_json_file(instance_path));
      auto sol = run_randomized(inst, seed, r);
      write_profile_csv(sink.buffer, inst, sol);
      auto ratio = competitive_ratio(inst, sol);
      summary("rand run: " + std::to_string(sol.size()) + " blocks, ratio " +
              (ratio.unbounded ? std::string("unbounded") : format_double(to_double(ratio.value))));
    };
  });

  // yao
  auto* yao = app.add_subcommand("yao", "randomized lower bound certificates");
  yao->require_subcommand(1);
  std::string cert_path, class_name = "generous";
  auto parse_class = [&class_name] {
    if (class_name == "generous") return AlgClass::Generous;
    if (class_name == "capped") return AlgClass::BudgetCapped;
    throw CLI::ValidationError("--class", "expected generous or capped");
  };
  auto* verify = yao->add_subcommand("verify", "evaluate a certificate against every deterministic algorithm");
  verify->add_option("--cert", cert_path, "certificate JSON (default the built-in ten-size certificate)");
  verify->add_option("--class", class_name, "generous or capped");
  out_option(verify);
  verify->callback([&] {
    action = [&] {
      auto cert = cert_path.empty() ? reference_certificate() : certificate_from_json(read_json_file(cert_path));
      auto cls = parse_class();
      auto clamped = yao_bound(cert, cls);
      auto literal = yao_bound(cert, cls, AlgReading::Literal);
      json doc{{"class", class_name},
               {"rho", to_string(clamped.rho)},
               {"rho_decimal", to_double(clamped.rho)},
               {"argmin", clamped.argmin},
               {"algorithms", clamped.algorithms},
               {"unclamped_rho", to_double(literal.rho)}};
      sink.buffer << doc.dump(2) << '\n';
      const bool ok = to_double(clamped.rho) >= cert.claimed_rho - 1e-3;
      summary("yao verify: rho = " + format_double(to_double(clamped.rho)) + " over " +
              std::to_string(clamped.algorithms) + " algorithms, claimed " + format_double(cert.claimed_rho));
      status = ok ? kOk : kVerifyFailed;
    };
  });
  long n = 10, budget = 1000;
  auto* search = yao->add_subcommand("search", "seeded local search for a stronger certificate");
  search->add_option("--N", n, "instance size (at most 14)")->check(CLI::Range(1, 14));
  search->add_option("--budget", budget, "candidate evaluations");
  search->add_option("--seed", seed, "random seed");
  search->add_option("--class", class_name, "generous or capped");
  out_option(search);
  search->callback([&] {
    action = [&] {
      SearchOptions opts;
      opts.budget = budget;
      opts.seed = seed;
      opts.cls = parse_class();
      auto cert = search_certificate(n, opts);
      sink.buffer << to_json(cert).dump(2) << '\n';
      summary("yao search: rho = " + format_double(cert.claimed_rho));
    };
  });

  // reduce
  std::string oracle_path;
  auto* reduce = app.add_subcommand("reduce", "separable instance from an accountable objective");
  reduce->add_option("--oracle", oracle_path, "objective JSON")->required();
  out_option(reduce);
  reduce->callback([&] {
    action = [&] {
      auto oracle = oracle_from_json(read_json_file(oracle_path));
      auto report = is_accountable(oracle);
      if (!report.holds) {
        summary("reduce: objective is not accountable");
        status = kVerifyFailed;
        return;
      }
      auto inst = reduce_to_separable(oracle);
      sink.buffer << to_json(inst).dump(2) << '\n';
      summary("reduce: " + std::to_string(inst.sets.size()) + " sets");
    };
  });

  // discretize
  long granularity = 1, count = 0;
  auto* disc = app.add_subcommand("discretize", "separable instance from a piecewise-linear instance");
  disc->add_option("--instance", instance_path, "piecewise-linear instance JSON (default v(c) = c)");
  disc->add_option("--n", granularity, "elements per unit size")->check(CLI::PositiveNumber);
  disc->add_option("--N", count, "number of sets")->required()->check(CLI::PositiveNumber);
  out_option(disc);
  disc->callback([&] {
    action = [&] {
      auto inst = discretize(load_piecewise(instance_path), granularity, count);
      sink.buffer << to_json(inst).dump(2) << '\n';
      summary("discretize: " + std::to_string(inst.sets.size()) + " sets");
    };
  });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? kOk : kUsage;
  }
  try {
    action();
    sink.flush();
  } catch (const CLI::ValidationError& e) {
    std::cerr << "usage: " << e.what() << '\n';
    return kUsage;
  } catch (const Error& e) {
    std::cerr << app.get_subcommands().front()->get_name() << ": " << e.what() << '\n';
    return kUsage;
  }
  return status;
}
