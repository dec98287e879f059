#include "clinch/polymatroid.hpp"

#include <algorithm>
#include <numeric>

namespace clinch {

namespace {

void check_agent_count(int n) {
  if (n < 1 || n > kMaxAgents) {
    throw std::invalid_argument("ground set size must be in [1, " + std::to_string(kMaxAgents) + "]");
  }
}

}  // namespace

SubmodularFunction::SubmodularFunction(int n, Form form) : n_(n), form_(std::move(form)) {
  if (const auto* ss = std::get_if<SponsoredSearch>(&form_)) {
    prefix_.assign(ss->ctrs.size() + 1, Rational(0));
    for (std::size_t k = 0; k < ss->ctrs.size(); ++k) prefix_[k + 1] = prefix_[k] + ss->ctrs[k];
  }
}

SubmodularFunction SubmodularFunction::multi_unit(int n, Rational supply) {
  check_agent_count(n);
  if (supply <= 0) throw std::invalid_argument("multi-unit supply must be positive");
  return SubmodularFunction(n, MultiUnit{std::move(supply)});
}

SubmodularFunction SubmodularFunction::sponsored_search(std::vector<Rational> ctrs) {
  const int n = static_cast<int>(ctrs.size());
  check_agent_count(n);
  for (std::size_t k = 0; k < ctrs.size(); ++k) {
    if (ctrs[k] <= 0) throw std::invalid_argument("click-through rates must be positive");
    if (k > 0 && ctrs[k] > ctrs[k - 1]) throw std::invalid_argument("click-through rates must be nonincreasing");
  }
  return SubmodularFunction(n, SponsoredSearch{std::move(ctrs)});
}

SubmodularFunction SubmodularFunction::explicit_table(int n, const std::vector<std::pair<Subset, Rational>>& values) {
  check_agent_count(n);
  if (n > kMaxCappedAgents) throw UnsupportedSize("explicit tables support at most 20 agents");
  std::vector<std::optional<Rational>> table(std::size_t{1} << n);
  for (const auto& [mask, value] : values) {
    if (!is_subset(mask, full_set(n))) throw std::invalid_argument("table key " + std::to_string(mask) + " outside ground set");
    table[mask] = value;
  }
  return SubmodularFunction(n, ExplicitTable{std::move(table)});
}

SubmodularFunction SubmodularFunction::explicit_table(int n, std::vector<std::optional<Rational>> values) {
  check_agent_count(n);
  if (n > kMaxCappedAgents) throw UnsupportedSize("explicit tables support at most 20 agents");
  if (values.size() != (std::size_t{1} << n)) throw std::invalid_argument("explicit table must have 2^n entries");
  return SubmodularFunction(n, ExplicitTable{std::move(values)});
}

Rational SubmodularFunction::eval(Subset s) const {
  if (!is_subset(s, ground_set())) throw PreconditionViolation("subset " + format_subset(s) + " outside ground set");
  return std::visit(
      [&](const auto& form) -> Rational {
        using T = std::decay_t<decltype(form)>;
        if constexpr (std::is_same_v<T, MultiUnit>) {
          return s == 0 ? Rational(0) : form.supply;
        } else if constexpr (std::is_same_v<T, SponsoredSearch>) {
          return prefix_[static_cast<std::size_t>(cardinality(s))];
        } else {
          const auto& entry = form.values[s];
          if (!entry) throw MalformedFunction("missing table entry for " + format_subset(s));
          return *entry;
        }
      },
      form_);
}

bool operator==(const SubmodularFunction& a, const SubmodularFunction& b) {
  if (a.n_ != b.n_ || a.form_.index() != b.form_.index()) return false;
  return std::visit(
      [&](const auto& lhs) -> bool {
        using T = std::decay_t<decltype(lhs)>;
        const auto& rhs = std::get<T>(b.form_);
        if constexpr (std::is_same_v<T, SubmodularFunction::MultiUnit>) {
          return lhs.supply == rhs.supply;
        } else if constexpr (std::is_same_v<T, SubmodularFunction::SponsoredSearch>) {
          return lhs.ctrs == rhs.ctrs;
        } else {
          return lhs.values == rhs.values;
        }
      },
      a.form_);
}

std::string Violation::describe() const {
  switch (kind) {
    case Kind::NonzeroEmptySet:
      return "f({}) != 0";
    case Kind::MissingEntry:
      return "missing value for " + format_subset(s);
    case Kind::NegativeValue:
      return "negative value at " + format_subset(s);
    case Kind::NotMonotone:
      return "not monotone: f(" + format_subset(s) + ") > f(" + format_subset(t) + ")";
    case Kind::NotSubmodular:
      return "not submodular: S=" + format_subset(s) + ", T=" + format_subset(t);
  }
  return "unknown violation";
}

std::vector<Violation> validate(const SubmodularFunction& f) {
  using Kind = Violation::Kind;
  const auto* table = std::get_if<SubmodularFunction::ExplicitTable>(&f.form());
  if (table == nullptr) return {};
  const int n = f.size();
  if (n > kMaxValidateAgents) throw UnsupportedSize("exhaustive validation supports at most 16 agents");

  std::vector<Violation> out;
  const Subset all = full_set(n);
  bool complete = true;
  for (Subset s = 0; s <= all; ++s) {
    if (!table->values[s]) {
      out.push_back({Kind::MissingEntry, s, 0});
      complete = false;
    } else if (*table->values[s] < 0) {
      out.push_back({Kind::NegativeValue, s, 0});
    }
  }
  if (!complete) return out;

  const auto& v = table->values;
  if (*v[0] != 0) out.push_back({Kind::NonzeroEmptySet, 0, 0});
  for (Subset s = 0; s <= all; ++s) {
    for (int i = 0; i < n; ++i) {
      if (contains(s, i)) continue;
      const Subset si = s | singleton(i);
      if (*v[s] > *v[si]) out.push_back({Kind::NotMonotone, s, si});
      for (int j = i + 1; j < n; ++j) {
        if (contains(s, j)) continue;
        const Subset sj = s | singleton(j);
        if (*v[si] + *v[sj] < *v[si | sj] + *v[s]) out.push_back({Kind::NotSubmodular, si, sj});
      }
    }
  }
  return out;
}

namespace detail {

void check_capped_size(Subset s) {
  if (cardinality(s) > kMaxCappedAgents) {
    throw UnsupportedSize("capped evaluation enumerates 2^|S| subsets; |S| must be <= 20");
  }
}

std::pair<Rational, Subset> capped_argmin_enumerate(const SubmodularFunction& f, const Vector& psi, Subset s) {
  check_capped_size(s);
  if (psi.size() != f.size()) throw PreconditionViolation("cap vector length differs from ground set size");
  // Enumerate submasks of s in increasing order so that ties keep the lowest mask.
  const std::vector<int> elems = members(s);
  const std::size_t k = elems.size();
  std::optional<Rational> best;
  Subset best_t = 0;
  for (std::uint64_t bits = 0; bits < (std::uint64_t{1} << k); ++bits) {
    Subset t = 0;
    Rational value(0);
    for (std::size_t j = 0; j < k; ++j) {
      if ((bits >> j) & 1u) {
        t |= singleton(elems[j]);
      } else {
        value += psi(elems[j]);
      }
    }
    value += f.eval(t);
    if (!best || value < *best || (value == *best && t < best_t)) {
      best = std::move(value);
      best_t = t;
    }
  }
  return {*best, best_t};
}

}  // namespace detail

Vector greedy_max(const SubmodularFunction& f, const Vector& psi, std::span<const int> order) {
  const int n = f.size();
  if (psi.size() != n) throw PreconditionViolation("cap vector length differs from ground set size");
  if (static_cast<int>(order.size()) != n) throw PreconditionViolation("greedy order must be a permutation of the agents");
  Subset seen = 0;
  for (int i : order) {
    if (i < 0 || i >= n || contains(seen, i)) throw PreconditionViolation("greedy order must be a permutation of the agents");
    seen |= singleton(i);
  }
  for (int i = 0; i < n; ++i) {
    if (psi(i) < 0) throw PreconditionViolation("caps must be nonnegative");
  }

  Vector y = zeros(n);
  const Subset all = full_set(n);
  for (int i : order) {
    Rational increment = psi(i);
    for (Subset s = 1; s <= all; ++s) {
      if (!contains(s, i)) continue;
      const Rational slack = f.eval(s) - subset_sum(y, s);
      if (slack < increment) increment = slack;
    }
    y(i) += increment;
  }
  return y;
}

Vector greedy_max(const SubmodularFunction& f, const Vector& psi) {
  std::vector<int> order(static_cast<std::size_t>(f.size()));
  std::iota(order.begin(), order.end(), 0);
  return greedy_max(f, psi, order);
}

std::optional<Subset> find_violated_set(const SubmodularFunction& f, const Vector& x) {
  const int n = f.size();
  if (x.size() != n) throw PreconditionViolation("vector length differs from ground set size");
  for (int i = 0; i < n; ++i) {
    if (x(i) < 0) return singleton(i);
  }
  const Subset all = full_set(n);
  for (Subset s = 1; s <= all; ++s) {
    if (subset_sum(x, s) > f.eval(s)) return s;
  }
  return std::nullopt;
}

bool is_feasible(const SubmodularFunction& f, const Vector& x) { return !find_violated_set(f, x).has_value(); }

bool is_tight(const SubmodularFunction& f, const Vector& x, Subset s) {
  if (auto bad = find_violated_set(f, x)) {
    throw PreconditionViolation("x " + format_vector(x) + " is not in P: violates " + format_subset(*bad));
  }
  return subset_sum(x, s) == f.eval(s);
}

std::vector<Subset> tight_sets(const SubmodularFunction& f, const Vector& x) {
  if (auto bad = find_violated_set(f, x)) {
    throw PreconditionViolation("x " + format_vector(x) + " is not in P: violates " + format_subset(*bad));
  }
  std::vector<Subset> out;
  const Subset all = f.ground_set();
  for (Subset s = 0; s <= all; ++s) {
    if (subset_sum(x, s) == f.eval(s)) out.push_back(s);
  }
  return out;
}

std::string describe(const SubmodularFunction& f) {
  return std::visit(
      [&](const auto& form) -> std::string {
        using T = std::decay_t<decltype(form)>;
        if constexpr (std::is_same_v<T, SubmodularFunction::MultiUnit>) {
          return "multi_unit(n=" + std::to_string(f.size()) + ", supply=" + to_string(form.supply) + ")";
        } else if constexpr (std::is_same_v<T, SubmodularFunction::SponsoredSearch>) {
          std::string out = "sponsored_search(";
          for (std::size_t k = 0; k < form.ctrs.size(); ++k) out += (k ? "," : "") + to_string(form.ctrs[k]);
          return out + ")";
        } else {
          return "explicit_table(n=" + std::to_string(f.size()) + ")";
        }
      },
      f.form());
}

}  // namespace clinch
