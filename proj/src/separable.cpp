#include "incmax/separable.hpp"

#include <algorithm>
#include <map>

namespace incmax {

namespace {

// Ratio with an explicit infinity, compared exactly.
struct Ratio {
  Rational value;
  bool inf = false;

  static Ratio of(const Rational& opt, const Rational& alg) {
    if (alg == 0) return opt == 0 ? Ratio{Rational(1), false} : Ratio{Rational(0), true};
    return Ratio{opt / alg, false};
  }
  bool operator<(const Ratio& o) const {
    if (inf) return false;
    if (o.inf) return true;
    return value < o.value;
  }
};

void check_solution(const SeparableInstance& instance, const SolutionSequence& solution) {
  for (std::size_t i = 0; i < solution.size(); ++i) {
    if (i > 0 && solution[i] <= solution[i - 1])
      throw Error("InvalidSolution", "block sizes must be strictly increasing");
    instance.density_of(solution[i]);
  }
}

}  // namespace

SeparableInstance SeparableInstance::from_densities(const std::vector<Rational>& densities) {
  SeparableInstance inst;
  for (std::size_t i = 0; i < densities.size(); ++i)
    inst.sets.push_back({static_cast<long>(i + 1), densities[i]});
  return inst;
}

long SeparableInstance::max_size() const {
  long n = 0;
  for (const auto& s : sets) n = std::max(n, s.size);
  return n;
}

long SeparableInstance::total_elements() const {
  long n = 0;
  for (const auto& s : sets) n += s.size;
  return n;
}

bool SeparableInstance::is_normalized() const {
  if (sets.empty()) return false;
  for (std::size_t i = 0; i < sets.size(); ++i) {
    if (sets[i].size != static_cast<long>(i + 1) || sets[i].density <= 0) return false;
    if (i == 0 && sets[0].density > 1) return false;
    if (i > 0) {
      if (sets[i].density > sets[i - 1].density) return false;
      if (sets[i].density * sets[i].size < sets[i - 1].density * sets[i - 1].size) return false;
    }
  }
  return true;
}

const Rational& SeparableInstance::density_of(long size) const {
  if (size >= 1 && static_cast<std::size_t>(size) <= sets.size() && sets[size - 1].size == size)
    return sets[size - 1].density;
  const Rational* best = nullptr;
  for (const auto& s : sets)
    if (s.size == size && (!best || s.density > *best)) best = &s.density;
  if (!best) throw Error("InvalidSolution", "no set with " + std::to_string(size) + " elements");
  return *best;
}

SeparableInstance normalize(const SeparableInstance& instance) {
  if (instance.sets.empty()) throw Error("EmptyInstance", "instance has no sets");
  std::map<long, Rational> best;
  for (const auto& s : instance.sets) {
    if (s.size <= 0 || s.density <= 0)
      throw Error("InvalidInstance", "set sizes and densities must be positive");
    auto it = best.find(s.size);
    if (it == best.end() || s.density > it->second) best[s.size] = s.density;
  }
  const long n = best.rbegin()->first;

  // Opt(k)/k: sets at least as large as k contribute their density, smaller ones v_j / k.
  std::vector<Rational> suffix_density(n + 2, Rational(0));
  for (long k = n; k >= 1; --k) {
    suffix_density[k] = suffix_density[k + 1];
    if (auto it = best.find(k); it != best.end() && it->second > suffix_density[k])
      suffix_density[k] = it->second;
  }
  std::vector<Rational> densities(n);
  Rational smaller_value = 0;
  for (long k = 1; k <= n; ++k) {
    Rational d = std::max(suffix_density[k], Rational(smaller_value / k));
    densities[k - 1] = d;
    if (auto it = best.find(k); it != best.end()) smaller_value = std::max(smaller_value, Rational(it->second * k));
  }
  if (densities[0] > 1) {
    Rational scale = densities[0];
    for (auto& d : densities) d /= scale;
  }
  return SeparableInstance::from_densities(densities);
}

Rational optimum(const SeparableInstance& instance, long C) {
  Rational best = 0;
  for (const auto& s : instance.sets) {
    Rational v = s.density * std::min(C, s.size);
    if (v > best) best = v;
  }
  return best;
}

Rational evaluate(const SeparableInstance& instance, const SolutionSequence& solution, long C) {
  if (C < 0 || C > instance.total_elements())
    throw Error("SizeOutOfRange", "size " + std::to_string(C) + " outside [0, " +
                                      std::to_string(instance.total_elements()) + "]");
  check_solution(instance, solution);
  Rational best = 0;
  long prefix = 0;
  for (long c : solution) {
    long taken = std::clamp(C - prefix, 0L, c);
    if (taken == 0) break;
    Rational v = instance.density_of(c) * taken;
    if (v > best) best = v;
    prefix += c;
  }
  return best;
}

RatioResult competitive_ratio(const SeparableInstance& instance, const SolutionSequence& solution) {
  check_solution(instance, solution);
  RatioResult out;
  out.value = 1;
  Ratio worst{Rational(1), false};
  const long n = instance.max_size();
  for (long C = 1; C <= n; ++C) {
    Ratio r = Ratio::of(optimum(instance, C), evaluate(instance, solution, C));
    if (worst < r) {
      worst = r;
      out.worst_size = C;
      if (r.inf) break;
    }
  }
  out.unbounded = worst.inf;
  out.value = worst.inf ? Rational(0) : worst.value;
  if (out.worst_size == 0) out.worst_size = 1;
  return out;
}

namespace {

class Search {
 public:
  explicit Search(const SeparableInstance& inst) : n_(inst.max_size()) {
    d_.resize(n_ + 1);
    v_.resize(n_ + 1);
    for (long i = 1; i <= n_; ++i) {
      d_[i] = inst.sets[i - 1].density;
      v_[i] = optimum(inst, i);
    }
  }

  BestSolution run() {
    SolutionSequence seq;
    visit(seq, 0, Rational(0), Ratio{Rational(1), false}, 1);
    BestSolution out;
    out.solution = best_seq_;
    out.ratio.unbounded = best_.inf;
    out.ratio.value = best_.inf ? Rational(0) : best_.value;
    out.ratio.worst_size = best_worst_;
    out.visited = visited_;
    return out;
  }

 private:
  // `fixed` is the worst ratio over sizes 1..prefix, which no extension can change.
  void visit(SolutionSequence& seq, long prefix, const Rational& done_value, const Ratio& fixed,
             long fixed_worst) {
    for (long c = seq.empty() ? 1 : seq.back() + 1; c <= n_; ++c) {
      if (have_best_ && !(fixed < best_)) return;
      ++visited_;
      seq.push_back(c);
      Ratio block = fixed;
      long block_worst = fixed_worst;
      Ratio tail = Ratio{Rational(0), false};
      long tail_worst = 0;
      const long block_end = prefix + c;
      for (long C = prefix + 1; C <= n_; ++C) {
        Rational alg = std::max(done_value, Rational(d_[c] * std::min(C - prefix, c)));
        Ratio r = Ratio::of(v_[C], alg);
        if (C <= block_end) {
          if (block < r) block = r, block_worst = C;
        } else if (tail < r) {
          tail = r, tail_worst = C;
        }
      }
      Ratio total = block;
      long total_worst = block_worst;
      if (total < tail) total = tail, total_worst = tail_worst;
      if (!have_best_ || total < best_) {
        have_best_ = true;
        best_ = total;
        best_worst_ = total_worst;
        best_seq_ = seq;
      }
      if (block_end < n_) visit(seq, block_end, std::max(done_value, Rational(d_[c] * c)), block, block_worst);
      seq.pop_back();
    }
  }

  long n_;
  std::vector<Rational> d_, v_;
  bool have_best_ = false;
  Ratio best_;
  long best_worst_ = 0;
  SolutionSequence best_seq_;
  long visited_ = 0;
};

}  // namespace

BestSolution best_deterministic(const SeparableInstance& instance, long size_cap) {
  if (instance.sets.empty()) throw Error("EmptyInstance", "instance has no sets");
  const long n = instance.max_size();
  if (n > size_cap)
    throw Error("InstanceTooLarge", std::to_string(n) + " sets exceed the cap of " + std::to_string(size_cap));
  for (std::size_t i = 0; i < instance.sets.size(); ++i)
    if (instance.sets[i].size != static_cast<long>(i + 1))
      throw Error("InvalidInstance", "exhaustive search needs one set of each size 1..N");
  return Search(instance).run();
}

void write_profile_csv(std::ostream& out, const SeparableInstance& instance,
                       const SolutionSequence& solution) {
  CsvWriter csv(out, {"C", "alg_value", "opt_value", "ratio"});
  for (long C = 1; C <= instance.max_size(); ++C) {
    Rational alg = evaluate(instance, solution, C);
    Rational opt = optimum(instance, C);
    std::string ratio = alg == 0 ? "inf" : format_double(to_double(Rational(opt / alg)));
    csv.row({std::to_string(C), format_double(to_double(alg)), format_double(to_double(opt)), ratio});
  }
}

SeparableInstance separable_from_json(const json& doc) {
  SeparableInstance inst;
  if (doc.contains("densities")) {
    std::vector<Rational> d;
    for (const auto& x : doc.at("densities")) d.push_back(rational_from_json(x));
    inst = SeparableInstance::from_densities(d);
  } else if (doc.contains("sets")) {
    for (const auto& s : doc.at("sets"))
      inst.sets.push_back({s.at(0).get<long>(), rational_from_json(s.at(1))});
  } else {
    throw Error("ParseError", "separable instance needs \"densities\" or \"sets\"");
  }
  if (inst.sets.empty()) throw Error("EmptyInstance", "instance has no sets");
  return inst;
}

json to_json(const SeparableInstance& instance) {
  bool by_index = true;
  for (std::size_t i = 0; i < instance.sets.size(); ++i)
    by_index = by_index && instance.sets[i].size == static_cast<long>(i + 1);
  json doc;
  if (by_index) {
    doc["densities"] = json::array();
    for (const auto& s : instance.sets) doc["densities"].push_back(to_string(s.density));
  } else {
    doc["sets"] = json::array();
    for (const auto& s : instance.sets) doc["sets"].push_back({s.size, to_string(s.density)});
  }
  return doc;
}

}  // namespace incmax
