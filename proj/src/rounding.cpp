#include "csplab/rounding.hpp"

#include <algorithm>
#include <random>
#include <set>
#include <stdexcept>

namespace csplab {

namespace {

Integer uniform_below(std::mt19937_64& rng, const Integer& count) {
  if (count <= 0) throw std::invalid_argument("uniform_below needs count >= 1");
  if (count == 1) return 0;
  const unsigned bits = msb(Integer(count - 1)) + 1;
  for (;;) {
    Integer x = 0;
    unsigned filled = 0;
    while (filled < bits) {
      x <<= 64;
      x += Integer(rng());
      filled += 64;
    }
    x >>= (filled - bits);
    if (x < count) return x;
  }
}

Integer integral_scaled(const Rational& p, const Integer& n, const char* what) {
  Rational scaled = p * n;
  if (den(scaled) != 1)
    throw std::invalid_argument(std::string(what) + ": distribution entry not in Delta_n");
  return num(scaled);
}

}  // namespace

Lattice::Lattice(int ground_size, std::vector<std::uint64_t> masks)
    : ground_size_(ground_size), masks_(std::move(masks)) {
  if (ground_size_ < 0 || ground_size_ > 63)
    throw std::invalid_argument("lattice ground set size must be in [0, 63]");
  if (masks_.empty()) throw std::invalid_argument("lattice needs at least one element");
  const std::uint64_t universe =
      ground_size_ == 0 ? 0 : (~std::uint64_t{0} >> (64 - ground_size_));
  for (std::size_t i = 0; i < masks_.size(); ++i) {
    if ((masks_[i] & ~universe) != 0)
      throw std::invalid_argument("lattice mask uses elements outside the ground set");
    if (!label_of_.emplace(masks_[i], static_cast<Label>(i)).second)
      throw std::invalid_argument("lattice label-to-subset map must be injective");
  }
  for (std::uint64_t x : masks_)
    for (std::uint64_t y : masks_) {
      if (!label_of_.count(x & y))
        throw std::invalid_argument("lattice not closed under intersection");
      if (!label_of_.count(x | y)) throw std::invalid_argument("lattice not closed under union");
    }
}

Label Lattice::label_of(std::uint64_t mask) const {
  auto it = label_of_.find(mask);
  if (it == label_of_.end())
    throw std::domain_error("thresholded subset is not a lattice element (mask " +
                            std::to_string(mask) + ")");
  return it->second;
}

Lattice Lattice::powerset(int s) {
  if (s < 0 || s > 20) throw std::invalid_argument("powerset lattice ground size out of range");
  std::vector<std::uint64_t> masks;
  for (std::uint64_t m = 0; m < (std::uint64_t{1} << s); ++m) masks.push_back(m);
  return Lattice(s, std::move(masks));
}

Assignment round_symmetric(const LPSolution& solution, const SymmetricOperation& g) {
  if (Integer(g.arity()) != solution.denominator)
    throw std::invalid_argument("operation arity must equal the solution denominator");
  Assignment s;
  for (const auto& p_v : solution.p_v) {
    Multiset m = g.space->from_distribution(p_v);
    s.values.push_back(g.apply(m));
  }
  return s;
}

Label g_hn_apply(const Lattice& lattice, const Integer& h, const std::vector<Rational>& p_v,
                 const Integer& n) {
  if (h < 1 || h > n) throw std::invalid_argument("g_hn requires 1 <= h <= n");
  if (static_cast<int>(p_v.size()) != lattice.domain_size())
    throw std::invalid_argument("distribution size does not match lattice domain");
  std::uint64_t subset = 0;
  for (int j = 0; j < lattice.ground_size(); ++j) {
    Rational mass(0);
    for (Label a = 0; a < lattice.domain_size(); ++a)
      if (lattice.mask_of(a) >> j & 1) mass += p_v[static_cast<std::size_t>(a)];
    Integer w = integral_scaled(mass, n, "g_hn_apply");
    if (w >= h) subset |= std::uint64_t{1} << j;
  }
  return lattice.label_of(subset);
}

SymmetricOperation g_hn_table(const Lattice& lattice, int h, int n, std::size_t cap) {
  if (h < 1 || h > n) throw std::invalid_argument("g_hn requires 1 <= h <= n");
  auto space = std::make_shared<MultisetSpace>(lattice.domain_size(), n, cap);
  std::vector<Label> table(space->size());
  for (std::size_t idx = 0; idx < space->size(); ++idx) {
    const Multiset& m = space->at(idx);
    std::uint64_t subset = 0;
    for (int j = 0; j < lattice.ground_size(); ++j) {
      int w = 0;
      for (Label a = 0; a < lattice.domain_size(); ++a)
        if (lattice.mask_of(a) >> j & 1) w += m.counts[static_cast<std::size_t>(a)];
      if (w >= h) subset |= std::uint64_t{1} << j;
    }
    table[idx] = lattice.label_of(subset);
  }
  return {space, std::move(table)};
}

Label s_hn_apply(const Integer& h, const std::vector<Rational>& p_v, const Integer& n) {
  if (p_v.size() != 3) throw std::invalid_argument("s_hn works over the three-element domain");
  if (h < 0 || h >= n / 3) throw std::invalid_argument("s_hn requires 0 <= h < floor(n/3)");
  Integer sum = integral_scaled(p_v[2] - p_v[0], n, "s_hn_apply");
  if (sum > h) return 2;
  if (sum < -h) return 0;
  return 1;
}

SymmetricOperation s_hn_table(int h, int n, std::size_t cap) {
  if (h < 0 || h >= n / 3) throw std::invalid_argument("s_hn requires 0 <= h < floor(n/3)");
  auto space = std::make_shared<MultisetSpace>(3, n, cap);
  std::vector<Label> table(space->size());
  for (std::size_t idx = 0; idx < space->size(); ++idx) {
    const Multiset& m = space->at(idx);
    int sum = m.counts[2] - m.counts[0];
    table[idx] = sum > h ? 2 : (sum < -h ? 0 : 1);
  }
  return {space, std::move(table)};
}

std::pair<Integer, Integer> lattice_h_range(int domain_size, int K, const Integer& n) {
  Integer M = 1;
  for (int i = 0; i < K; ++i) M *= domain_size;
  // strictly greater than (1 - 1/M) n = n - n/M
  Integer first = (n * (M - 1)) / M + 1;
  return {first, n};
}

namespace {

struct Thresholder {
  // Assignment as a function of h over [h_first, h_last], constant between
  // breakpoints; breakpoints include h_first and every point where some
  // variable's label changes.
  Integer h_first, h_last;
  std::vector<Integer> breakpoints;  // sorted, starts with h_first

  template <typename ApplyFn>
  std::vector<HClass> classes(const Instance& instance, ApplyFn&& apply_at) const {
    std::vector<HClass> out;
    for (std::size_t t = 0; t < breakpoints.size(); ++t) {
      HClass cls;
      cls.h_begin = breakpoints[t];
      cls.h_end = (t + 1 < breakpoints.size()) ? Integer(breakpoints[t + 1] - 1) : h_last;
      cls.assignment = apply_at(cls.h_begin);
      EvalResult r = evaluate(instance, cls.assignment);
      cls.value = r.value;
      cls.hard_violations = r.hard_violations;
      out.push_back(std::move(cls));
    }
    return out;
  }
};

Thresholder make_thresholder(const Integer& h_first, const Integer& h_last,
                             const std::set<Integer>& change_points) {
  Thresholder t;
  t.h_first = h_first;
  t.h_last = h_last;
  t.breakpoints.push_back(h_first);
  for (const Integer& p : change_points)
    if (p > h_first && p <= h_last) t.breakpoints.push_back(p);
  return t;
}

RoundingReport report_from_classes(const LPSolution& solution,
                                   const std::vector<HClass>& classes, const std::string& scheme) {
  const HClass* best = nullptr;
  for (const HClass& c : classes) {
    if (!best || std::make_pair(c.hard_violations, c.value) <
                     std::make_pair(best->hard_violations, best->value))
      best = &c;
  }
  RoundingReport rep;
  rep.assignment = best->assignment;
  rep.value = best->value;
  rep.hard_violations = best->hard_violations;
  rep.hard_feasible = best->hard_violations == 0;
  rep.blp_value = solution.blp_value;
  rep.scheme = scheme;
  rep.mode = "derandomized";
  rep.h_used = best->h_begin;
  for (const HClass& c : classes) rep.h_candidates.push_back(c.h_begin);
  rep.denominator = solution.denominator;
  return rep;
}

RoundingReport sample_report(const Instance& instance, const LPSolution& solution,
                             const Integer& h, std::uint64_t seed, const Assignment& assignment,
                             const std::string& scheme) {
  EvalResult r = evaluate(instance, assignment);
  RoundingReport rep;
  rep.assignment = assignment;
  rep.value = r.value;
  rep.hard_violations = r.hard_violations;
  rep.hard_feasible = r.hard_violations == 0;
  rep.blp_value = solution.blp_value;
  rep.scheme = scheme;
  rep.mode = "sample";
  rep.h_used = h;
  rep.seed = seed;
  rep.denominator = solution.denominator;
  return rep;
}

}  // namespace

std::vector<HClass> lattice_round_classes(const Instance& instance, const LPSolution& solution,
                                          const Lattice& lattice, int K) {
  if (lattice.domain_size() != instance.domain().size)
    throw std::invalid_argument("lattice domain does not match instance domain");
  if (K == 0) K = instance.max_constraint_arity();
  const Integer& n = solution.denominator;
  auto [h_first, h_last] = lattice_h_range(instance.domain().size, K, n);
  Integer M = 1;
  for (int i = 0; i < K; ++i) M *= instance.domain().size;
  if (n < M)
    throw std::invalid_argument(
        "solution denominator below |A|^K; call rescale_denominator first");
  if (h_first > h_last) throw std::invalid_argument("empty h-range (n too small)");

  // label changes exactly at h = w + 1 for each membership weight w
  std::set<Integer> change_points;
  for (const auto& p_v : solution.p_v) {
    for (int j = 0; j < lattice.ground_size(); ++j) {
      Rational mass(0);
      for (Label a = 0; a < lattice.domain_size(); ++a)
        if (lattice.mask_of(a) >> j & 1) mass += p_v[static_cast<std::size_t>(a)];
      change_points.insert(integral_scaled(mass, n, "lattice_round") + 1);
    }
  }
  Thresholder t = make_thresholder(h_first, h_last, change_points);
  return t.classes(instance, [&](const Integer& h) {
    Assignment s;
    for (const auto& p_v : solution.p_v) s.values.push_back(g_hn_apply(lattice, h, p_v, n));
    return s;
  });
}

RoundingReport lattice_round(const Instance& instance, const LPSolution& solution,
                             const Lattice& lattice, RoundingMode mode, std::uint64_t seed,
                             int K) {
  if (mode == RoundingMode::Derandomized) {
    auto classes = lattice_round_classes(instance, solution, lattice, K);
    return report_from_classes(solution, classes, "lattice");
  }
  if (K == 0) K = instance.max_constraint_arity();
  const Integer& n = solution.denominator;
  Integer M = 1;
  for (int i = 0; i < K; ++i) M *= instance.domain().size;
  if (n < M)
    throw std::invalid_argument(
        "solution denominator below |A|^K; call rescale_denominator first");
  auto [h_first, h_last] = lattice_h_range(instance.domain().size, K, n);
  if (h_first > h_last) throw std::invalid_argument("empty h-range (n too small)");
  std::mt19937_64 rng(seed);
  Integer h = h_first + uniform_below(rng, h_last - h_first + 1);
  Assignment s;
  for (const auto& p_v : solution.p_v) s.values.push_back(g_hn_apply(lattice, h, p_v, n));
  return sample_report(instance, solution, h, seed, s, "lattice");
}

std::vector<HClass> three_element_round_classes(const Instance& instance,
                                                const LPSolution& solution) {
  if (instance.domain().size != 3)
    throw std::invalid_argument("three-element rounding needs domain size 3");
  const Integer& n = solution.denominator;
  Integer H = n / 3;
  if (H < 1) throw std::invalid_argument("empty h-range (n too small, need n >= 3)");

  std::set<Integer> change_points;
  for (const auto& p_v : solution.p_v) {
    Integer sum = integral_scaled(p_v[2] - p_v[0], n, "three_element_round");
    change_points.insert(abs(sum));
  }
  Thresholder t = make_thresholder(Integer(0), Integer(H - 1), change_points);
  return t.classes(instance, [&](const Integer& h) {
    Assignment s;
    for (const auto& p_v : solution.p_v) s.values.push_back(s_hn_apply(h, p_v, n));
    return s;
  });
}

RoundingReport three_element_round(const Instance& instance, const LPSolution& solution,
                                   RoundingMode mode, std::uint64_t seed) {
  if (mode == RoundingMode::Derandomized) {
    auto classes = three_element_round_classes(instance, solution);
    return report_from_classes(solution, classes, "three_element");
  }
  if (instance.domain().size != 3)
    throw std::invalid_argument("three-element rounding needs domain size 3");
  const Integer& n = solution.denominator;
  Integer H = n / 3;
  if (H < 1) throw std::invalid_argument("empty h-range (n too small, need n >= 3)");
  std::mt19937_64 rng(seed);
  Integer h = uniform_below(rng, H);
  Assignment s;
  for (const auto& p_v : solution.p_v) s.values.push_back(s_hn_apply(h, p_v, n));
  return sample_report(instance, solution, h, seed, s, "three_element");
}

FractionalOperation make_phi_lattice(const Lattice& lattice, int K, int n, std::size_t cap) {
  auto [h_first, h_last] = lattice_h_range(lattice.domain_size(), K, Integer(n));
  if (h_first > h_last) throw std::invalid_argument("empty h-range");
  FractionalOperation phi;
  Integer count = h_last - h_first + 1;
  for (Integer h = h_first; h <= h_last; ++h)
    phi.support.push_back(
        {g_hn_table(lattice, static_cast<int>(h), n, cap), Rational(1, count)});
  phi.validate();
  return phi;
}

FractionalOperation make_phi_three_element(int n, std::size_t cap) {
  int H = n / 3;
  if (H < 1) throw std::invalid_argument("empty h-range (need n >= 3)");
  FractionalOperation phi;
  for (int h = 0; h < H; ++h)
    phi.support.push_back({s_hn_table(h, n, cap), Rational(1, H)});
  phi.validate();
  return phi;
}

}  // namespace csplab
