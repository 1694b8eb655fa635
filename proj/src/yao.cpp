#include "incmax/yao.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

namespace incmax {

void YaoCertificate::validate() const {
  if (N < 1) throw Error("InvalidCertificate", "N must be positive");
  if (static_cast<long>(d.size()) != N || static_cast<long>(p.size()) != N)
    throw Error("InvalidCertificate", "d and p must have N entries");
  Rational total = 0;
  for (long i = 0; i < N; ++i) {
    if (d[i] < 0) throw Error("InvalidCertificate", "negative density at size " + std::to_string(i + 1));
    if (p[i] < 0) throw Error("InvalidCertificate", "negative probability at size " + std::to_string(i + 1));
    total += p[i];
  }
  if (total != 1) throw Error("InvalidCertificate", "probabilities sum to " + to_string(total));
}

namespace {

void extend(std::vector<DeterministicAlg>& out, DeterministicAlg& prefix, long sum, long N, AlgClass cls) {
  const long first = prefix.empty() ? 1 : prefix.back() + 1;
  for (long c = first; c <= N; ++c) {
    if (cls == AlgClass::BudgetCapped && sum + c > N) break;
    prefix.push_back(c);
    out.push_back(prefix);
    if (sum + c < N) extend(out, prefix, sum + c, N, cls);
    prefix.pop_back();
  }
}

long clamp_count(long i, long prefix, long c, AlgReading reading) {
  if (reading == AlgReading::Literal) return std::max(i - prefix, c);
  return std::clamp(i - prefix, 0L, c);
}

struct Share {
  long count;
  long block;
};

// Per size, the element counts each block contributes under the clamped reading.
std::vector<std::vector<Share>> share_table(const DeterministicAlg& alg, long N) {
  std::vector<std::vector<Share>> table(N);
  for (long i = 1; i <= N; ++i) {
    long prefix = 0;
    for (long c : alg) {
      long k = clamp_count(i, prefix, c, AlgReading::Clamped);
      if (k > 0) table[i - 1].push_back({k, c});
      prefix += c;
    }
  }
  return table;
}

class FastBound {
 public:
  FastBound(long N, AlgClass cls) : N_(N) {
    for (const auto& alg : enumerate_algorithms(N, cls)) tables_.push_back(share_table(alg, N));
  }

  double operator()(const std::vector<double>& d, const std::vector<double>& p) const {
    double best = std::numeric_limits<double>::infinity();
    for (const auto& table : tables_) {
      double sum = 0;
      bool finite = true;
      for (long i = 1; i <= N_ && finite; ++i) {
        if (p[i - 1] <= 0) continue;
        double v = 0;
        for (const auto& s : table[i - 1]) v = std::max(v, s.count * d[s.block - 1]);
        if (v <= 0) finite = false;
        else sum += p[i - 1] * i * d[i - 1] / v;
        if (sum >= best) break;
      }
      if (finite) best = std::min(best, sum);
    }
    return best;
  }

 private:
  long N_;
  std::vector<std::vector<std::vector<Share>>> tables_;
};

}  // namespace

std::vector<DeterministicAlg> enumerate_algorithms(long N, AlgClass cls) {
  if (N < 1) throw Error("InvalidArgument", "N must be positive");
  if (N > 20) throw Error("NTooLarge", "enumeration supports N <= 20");
  std::vector<DeterministicAlg> out;
  DeterministicAlg prefix;
  extend(out, prefix, 0, N, cls);
  return out;
}

Rational alg_value(const std::vector<Rational>& d, const DeterministicAlg& alg, long i, AlgReading reading) {
  Rational best = 0;
  long prefix = 0;
  for (long c : alg) {
    long k = clamp_count(i, prefix, c, reading);
    if (k > 0) best = std::max(best, Rational(k) * d[c - 1]);
    prefix += c;
  }
  return best;
}

YaoBound yao_bound(const YaoCertificate& cert, AlgClass cls, AlgReading reading) {
  cert.validate();
  const auto algs = enumerate_algorithms(cert.N, cls);
  YaoBound out;
  out.algorithms = algs.size();
  bool found = false;
  for (const auto& alg : algs) {
    Rational sum = 0;
    bool finite = true;
    for (long i = 1; i <= cert.N; ++i) {
      const Rational& pi = cert.p[i - 1];
      if (pi == 0) continue;
      Rational v = alg_value(cert.d, alg, i, reading);
      if (v == 0) {
        finite = false;
        break;
      }
      sum += pi * i * cert.d[i - 1] / v;
    }
    if (!finite) {
      ++out.skipped;
      continue;
    }
    if (!found || sum < out.rho) {
      out.rho = sum;
      out.argmin = alg;
      found = true;
    }
  }
  if (!found) throw Error("DivisionByZero", "every algorithm has value zero at some size with positive probability");
  return out;
}

YaoCertificate reference_certificate() {
  YaoCertificate cert;
  cert.N = 10;
  for (const char* s : {"1", "1/2", "1/2", "1/2", "2/5", "1/3", "1/3", "1/3", "1/3", "1/3"})
    cert.d.push_back(parse_rational(s));
  cert.p.assign(10, Rational(0));
  cert.p[0] = parse_rational("0.132");
  cert.p[3] = parse_rational("0.395");
  cert.p[9] = parse_rational("0.473");
  cert.claimed_rho = 1.447;
  return cert;
}

YaoCertificate search_certificate(long N, const SearchOptions& options) {
  if (N < 1) throw Error("InvalidArgument", "N must be positive");
  if (N > 14) throw Error("NTooLarge", "search supports N <= 14");

  YaoCertificate start;
  if (N == 10) {
    start = reference_certificate();
  } else {
    start.N = N;
    for (long i = 1; i <= N; ++i) {
      start.d.push_back(Rational(1, i));
      start.p.push_back(Rational(1, N));
    }
  }
  const Rational start_rho = yao_bound(start, options.cls).rho;

  std::vector<double> d, p;
  for (long i = 0; i < N; ++i) {
    d.push_back(to_double(start.d[i]));
    p.push_back(to_double(start.p[i]));
  }
  FastBound bound(N, options.cls);
  double current = bound(d, p);
  std::mt19937_64 gen(options.seed);
  auto uniform = [&gen](long lo, long hi) { return std::uniform_int_distribution<long>(lo, hi)(gen); };

  for (long step = 0; step < options.budget && N > 1; ++step) {
    const double size = std::ldexp(1.0, -static_cast<int>(uniform(1, 20)));
    auto nd = d;
    auto np = p;
    if (uniform(0, 1) == 0) {
      // d_1 stays fixed: the bound is invariant under scaling d.
      long j = uniform(1, N - 1);
      nd[j] += uniform(0, 1) ? size : -size;
      if (nd[j] <= 0) continue;
      if (options.monotone && (nd[j] > nd[j - 1] || (j + 1 < N && nd[j] < nd[j + 1]))) continue;
    } else {
      long a = uniform(0, N - 1), b = uniform(0, N - 2);
      if (b >= a) ++b;
      double moved = std::min(np[a], size);
      if (moved <= 0) continue;
      np[a] -= moved;
      np[b] += moved;
    }
    double value = bound(nd, np);
    if (value > current) {
      current = value;
      d = std::move(nd);
      p = std::move(np);
    }
  }

  YaoCertificate found;
  found.N = N;
  Rational total = 0;
  for (long i = 0; i < N; ++i) {
    found.d.push_back(from_double(d[i]));
    found.p.push_back(from_double(std::max(p[i], 0.0)));
    total += found.p.back();
  }
  for (auto& pi : found.p) pi /= total;
  const Rational found_rho = yao_bound(found, options.cls).rho;
  if (found_rho >= start_rho) {
    found.claimed_rho = to_double(found_rho);
    return found;
  }
  start.claimed_rho = to_double(start_rho);
  return start;
}

YaoCertificate certificate_from_json(const json& doc) {
  YaoCertificate cert;
  if (!doc.contains("N") || !doc.contains("d") || !doc.contains("p"))
    throw Error("ParseError", "certificate needs N, d and p");
  cert.N = doc.at("N").get<long>();
  for (const auto& x : doc.at("d")) cert.d.push_back(rational_from_json(x));
  for (const auto& x : doc.at("p")) cert.p.push_back(rational_from_json(x));
  if (doc.contains("rho")) cert.claimed_rho = to_double(rational_from_json(doc.at("rho")));
  cert.validate();
  return cert;
}

json to_json(const YaoCertificate& cert) {
  json doc;
  doc["N"] = cert.N;
  doc["d"] = json::array();
  doc["p"] = json::array();
  for (const auto& x : cert.d) doc["d"].push_back(to_string(x));
  for (const auto& x : cert.p) doc["p"].push_back(to_string(x));
  doc["rho"] = format_double(cert.claimed_rho);
  return doc;
}

}  // namespace incmax
