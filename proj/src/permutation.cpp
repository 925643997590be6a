#include "stacksort/permutation.hpp"

#include <algorithm>
#include <cctype>
#include <functional>
#include <sstream>

namespace stacksort {

ValueSequence::ValueSequence(std::vector<std::uint32_t> entries) : entries_(std::move(entries)) {
  for (auto v : entries_) {
    if (v == 0) throw NotABijection("value sequence entries must be positive");
  }
  auto sorted = entries_;
  std::sort(sorted.begin(), sorted.end());
  if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) {
    throw NotABijection("value sequence entries must be pairwise distinct");
  }
}

std::uint32_t ValueSequence::at(std::size_t pos) const {
  if (pos < 1 || pos > entries_.size()) {
    throw IndexOutOfRange("sequence position out of range");
  }
  return entries_[pos - 1];
}

ValueSequence ValueSequence::shifted(std::int64_t m) const {
  std::vector<std::uint32_t> out;
  out.reserve(entries_.size());
  for (auto v : entries_) {
    const std::int64_t shifted = static_cast<std::int64_t>(v) + m;
    if (shifted < 1) throw NonPositiveResult("shift would produce a non-positive entry");
    out.push_back(static_cast<std::uint32_t>(shifted));
  }
  return ValueSequence(std::move(out));
}

ValueSequence& ValueSequence::append(const ValueSequence& tail) {
  std::vector<std::uint32_t> merged = entries_;
  merged.insert(merged.end(), tail.entries_.begin(), tail.entries_.end());
  *this = ValueSequence(std::move(merged));
  return *this;
}

ValueSequence shift(const ValueSequence& v, std::int64_t m) { return v.shifted(m); }

Permutation::Permutation(std::vector<std::uint32_t> entries) : entries_(std::move(entries)) {
  const std::size_t n = entries_.size();
  if (n == 0) throw NotABijection("a permutation has length at least 1");
  std::vector<bool> seen(n + 1, false);
  for (auto v : entries_) {
    if (v < 1 || v > n) {
      throw NotABijection("entry " + std::to_string(v) + " outside 1.." + std::to_string(n));
    }
    if (seen[v]) throw NotABijection("duplicate entry " + std::to_string(v));
    seen[v] = true;
  }
}

Permutation Permutation::identity(std::uint32_t n) {
  std::vector<std::uint32_t> e(n);
  for (std::uint32_t i = 0; i < n; ++i) e[i] = i + 1;
  return Permutation(std::move(e));
}

Permutation Permutation::parse(const std::string& text) {
  std::vector<std::string> tokens;
  std::string cur;
  for (char c : text) {
    if (std::isspace(static_cast<unsigned char>(c)) || c == ',') {
      if (!cur.empty()) tokens.push_back(std::move(cur)), cur.clear();
    } else {
      cur.push_back(c);
    }
  }
  if (!cur.empty()) tokens.push_back(std::move(cur));
  if (tokens.empty()) throw ParseError("empty permutation text");

  for (const auto& tok : tokens) {
    for (char c : tok) {
      if (!std::isdigit(static_cast<unsigned char>(c))) {
        throw ParseError("malformed token '" + tok + "'");
      }
    }
  }

  std::vector<std::uint32_t> values;
  if (tokens.size() == 1 && tokens[0].size() > 1) {
    // Compact digit string: one value per digit.
    for (char c : tokens[0]) values.push_back(static_cast<std::uint32_t>(c - '0'));
  } else {
    for (const auto& tok : tokens) {
      unsigned long long v = 0;
      try {
        v = std::stoull(tok);
      } catch (const std::exception&) {
        throw ParseError("malformed token '" + tok + "'");
      }
      if (v == 0 || v > tokens.size()) {
        throw NotABijection("entry " + tok + " outside 1.." + std::to_string(tokens.size()));
      }
      values.push_back(static_cast<std::uint32_t>(v));
    }
  }
  return Permutation(std::move(values));
}

std::string Permutation::render() const {
  std::ostringstream os;
  for (std::size_t i = 0; i < entries_.size(); ++i) {
    if (i) os << ' ';
    os << entries_[i];
  }
  return os.str();
}

std::uint64_t Permutation::packed() const {
  if (size() > kMaxPackedLength) {
    throw std::invalid_argument("packed encoding covers lengths up to 16 only");
  }
  std::uint64_t bits = 0;
  for (std::size_t i = 0; i < entries_.size(); ++i) {
    bits |= static_cast<std::uint64_t>(entries_[i] - 1) << (4 * i);
  }
  return bits;
}

Permutation Permutation::from_packed(std::uint64_t bits, std::uint32_t n) {
  if (n < 1 || n > kMaxPackedLength) {
    throw std::invalid_argument("packed encoding covers lengths 1..16 only");
  }
  std::vector<std::uint32_t> e(n);
  for (std::uint32_t i = 0; i < n; ++i) {
    e[i] = static_cast<std::uint32_t>((bits >> (4 * i)) & 0xF) + 1;
  }
  return Permutation(std::move(e));
}

std::uint32_t Permutation::at(std::uint32_t pos) const {
  if (pos < 1 || pos > size()) throw IndexOutOfRange("position out of range");
  return entries_[pos - 1];
}

std::uint32_t Permutation::position_of(std::uint32_t value) const {
  for (std::uint32_t i = 0; i < size(); ++i) {
    if (entries_[i] == value) return i + 1;
  }
  throw IndexOutOfRange("value not present");
}

Permutation Permutation::delete_at(std::uint32_t pos) const {
  if (pos < 1 || pos > size()) throw IndexOutOfRange("deletion position out of range");
  const std::uint32_t removed = entries_[pos - 1];
  std::vector<std::uint32_t> e;
  e.reserve(size() - 1);
  for (std::uint32_t i = 0; i < size(); ++i) {
    if (i == pos - 1) continue;
    e.push_back(entries_[i] > removed ? entries_[i] - 1 : entries_[i]);
  }
  return Permutation(std::move(e));
}

namespace {

// Backtracking embedding search over candidate index tuples, pruned by the
// value window implied by the already-matched entries. Visits embeddings in
// lexicographic index order; visit returns false to stop early. Returns true
// when the enumeration ran to completion.
bool embed_search(const std::vector<std::uint32_t>& hay, const std::vector<std::uint32_t>& pat,
                  const std::function<bool(const std::vector<std::uint32_t>&)>& visit) {
  const std::size_t n = hay.size();
  const std::size_t k = pat.size();
  if (k > n) return true;

  std::vector<std::uint32_t> chosen;  // 0-based indices into hay
  chosen.reserve(k);

  std::function<bool(std::size_t)> step = [&](std::size_t slot) -> bool {
    if (slot == k) return visit(chosen);
    // Window (lo, hi) the next value must fall into, from matched entries.
    std::uint32_t lo = 0, hi = static_cast<std::uint32_t>(n) + 1;
    for (std::size_t m = 0; m < slot; ++m) {
      const std::uint32_t v = hay[chosen[m]];
      if (pat[m] < pat[slot]) {
        lo = std::max(lo, v);
      } else {
        hi = std::min(hi, v);
      }
    }
    const std::size_t first = chosen.empty() ? 0 : chosen.back() + 1;
    const std::size_t last = n - (k - slot);  // leave room for remaining slots
    for (std::size_t i = first; i <= last; ++i) {
      const std::uint32_t v = hay[i];
      if (v <= lo || v >= hi) continue;
      chosen.push_back(static_cast<std::uint32_t>(i));
      if (!step(slot + 1)) return false;
      chosen.pop_back();
    }
    return true;
  };
  return step(0);
}

}  // namespace

bool contains(const Permutation& p, const Permutation& q) {
  if (q.size() > p.size()) return false;
  bool found = false;
  embed_search(p.entries(), q.entries(), [&](const std::vector<std::uint32_t>&) {
    found = true;
    return false;
  });
  return found;
}

std::optional<std::vector<std::uint32_t>> containment_witness(const Permutation& p,
                                                              const Permutation& q) {
  if (q.size() > p.size()) return std::nullopt;
  std::optional<std::vector<std::uint32_t>> witness;
  embed_search(p.entries(), q.entries(), [&](const std::vector<std::uint32_t>& idx) {
    std::vector<std::uint32_t> one_based(idx);
    for (auto& i : one_based) ++i;
    witness = std::move(one_based);
    return false;
  });
  return witness;
}

namespace detail {

bool for_each_embedding0(const std::vector<std::uint32_t>& p, const std::vector<std::uint32_t>& q,
                         const std::function<bool(const std::vector<std::uint32_t>&)>& visit) {
  return embed_search(p, q, visit);
}

}  // namespace detail

std::vector<Permutation> one_point_extensions(const Permutation& p) {
  const std::uint32_t n = p.size();
  std::vector<Permutation> out;
  out.reserve(static_cast<std::size_t>(n + 1) * (n + 1));
  for (std::uint32_t v = 1; v <= n + 1; ++v) {
    std::vector<std::uint32_t> bumped;
    bumped.reserve(n + 1);
    for (auto e : p.entries()) bumped.push_back(e >= v ? e + 1 : e);
    for (std::uint32_t pos = 0; pos <= n; ++pos) {
      std::vector<std::uint32_t> child = bumped;
      child.insert(child.begin() + pos, v);
      out.emplace_back(std::move(child));
    }
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

AntichainCheck is_antichain(const std::vector<Permutation>& ps) {
  std::vector<Permutation> members = ps;
  std::sort(members.begin(), members.end());
  members.erase(std::unique(members.begin(), members.end()), members.end());
  for (const auto& big : members) {
    for (const auto& small : members) {
      if (big == small || small.size() > big.size()) continue;
      if (contains(big, small)) {
        return AntichainCheck{false, std::make_pair(big, small)};
      }
    }
  }
  return AntichainCheck{};
}

}  // namespace stacksort
