#include "cgt/coset_enum.hpp"

#include <numeric>

namespace cgt {

namespace {

constexpr long kUndef = -1;

struct Enumerator {
  std::size_t cols;
  std::size_t cap;
  std::vector<std::vector<long>> table;
  std::vector<long> parent;
  bool overflow = false;

  long rep(long c) {
    long r = c;
    while (parent[r] != r) r = parent[r];
    while (parent[c] != r) {
      long next = parent[c];
      parent[c] = r;
      c = next;
    }
    return r;
  }

  long define(long c, std::size_t x) {
    if (table.size() >= cap) {
      overflow = true;
      return kUndef;
    }
    long d = static_cast<long>(table.size());
    table.emplace_back(cols, kUndef);
    parent.push_back(d);
    table[c][x] = d;
    table[d][x ^ 1] = c;
    return d;
  }

  void merge(long k, long l, std::vector<long>& queue) {
    long a = rep(k), b = rep(l);
    if (a == b) return;
    long lo = std::min(a, b), hi = std::max(a, b);
    parent[hi] = lo;
    queue.push_back(hi);
  }

  void coincidence(long a, long b) {
    std::vector<long> queue;
    merge(a, b, queue);
    for (std::size_t i = 0; i < queue.size(); ++i) {
      long g = queue[i];
      for (std::size_t x = 0; x < cols; ++x) {
        long d = table[g][x];
        if (d == kUndef) continue;
        table[d][x ^ 1] = kUndef;
        long mu = rep(g), nu = rep(d);
        if (table[mu][x] != kUndef) {
          merge(nu, table[mu][x], queue);
        } else if (table[nu][x ^ 1] != kUndef) {
          merge(mu, table[nu][x ^ 1], queue);
        } else {
          table[mu][x] = nu;
          table[nu][x ^ 1] = mu;
        }
      }
    }
  }

  void scan_and_fill(long c, Word const& w) {
    long f = c, b = c;
    long i = 0, j = static_cast<long>(w.size()) - 1;
    while (true) {
      while (i <= j && table[f][w[i].code] != kUndef) f = table[f][w[i++].code];
      if (i > j) {
        if (f != c) coincidence(f, c);
        return;
      }
      while (j >= i && table[b][w[j].code ^ 1] != kUndef) b = table[b][w[j--].code ^ 1];
      if (j < i) {
        coincidence(f, b);
        return;
      }
      if (i == j) {
        table[f][w[i].code] = b;
        table[b][w[i].code ^ 1] = f;
        return;
      }
      if (define(f, w[i].code) == kUndef) return;
    }
  }
};

}  // namespace

std::optional<CosetTable> CosetTable::enumerate(Presentation const& p, std::size_t max_cosets) {
  Enumerator e{2 * p.rank(), std::max<std::size_t>(max_cosets, 1), {}, {}, false};
  e.table.emplace_back(e.cols, kUndef);
  e.parent.push_back(0);
  for (long c = 0; c < static_cast<long>(e.table.size()); ++c) {
    for (auto const& r : p.relators()) {
      if (e.parent[c] != c) break;
      e.scan_and_fill(c, r);
      if (e.overflow) return std::nullopt;
    }
    for (std::size_t x = 0; x < e.cols; ++x) {
      if (e.parent[c] != c) break;
      if (e.table[c][x] == kUndef && e.define(c, x) == kUndef) return std::nullopt;
    }
  }
  std::vector<long> live_index(e.table.size(), -1);
  std::size_t n = 0;
  for (std::size_t c = 0; c < e.table.size(); ++c)
    if (e.parent[c] == static_cast<long>(c)) live_index[c] = static_cast<long>(n++);
  CosetTable t;
  t.rows_.assign(n, std::vector<std::size_t>(e.cols, 0));
  for (std::size_t c = 0; c < e.table.size(); ++c) {
    if (live_index[c] < 0) continue;
    for (std::size_t x = 0; x < e.cols; ++x) {
      long d = e.table[c][x];
      if (d == kUndef) return std::nullopt;
      t.rows_[live_index[c]][x] = static_cast<std::size_t>(live_index[e.rep(d)]);
    }
  }
  return t;
}

std::size_t CosetTable::act(std::size_t coset, Word const& w) const {
  for (auto l : w) coset = rows_[coset][l.code];
  return coset;
}

}  // namespace cgt
