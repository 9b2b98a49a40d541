#include "lomap/wick.hpp"

#include <algorithm>
#include <array>
#include <atomic>
#include <cstring>
#include <mutex>
#include <string>
#include <thread>
#include <unordered_map>

#include "lomap/errors.hpp"

namespace lomap {

namespace {

using Counts = std::vector<std::int64_t>;

// Factor f is the matrix entry M_{L_f, R_f}; L_f is index variable f and
// R_f is variable next[f], so variable v touches factors v and prev[v].
struct Layout {
  int h = 0;
  std::vector<int> next, prev;

  explicit Layout(const std::vector<int>& ks) {
    for (int k : ks) {
      int o = h;
      for (int i = 0; i < k; ++i) {
        next.push_back(o + (i + 1) % k);
        prev.push_back(o + (i + k - 1) % k);
      }
      h += k;
    }
  }
  int left(int f) const { return f; }
  int right(int f) const { return next[static_cast<std::size_t>(f)]; }
};

void add_shifted(Counts& acc, const Counts& x, int shift) {
  if (acc.size() < x.size() + static_cast<std::size_t>(shift)) acc.resize(x.size() + static_cast<std::size_t>(shift), 0);
  for (std::size_t i = 0; i < x.size(); ++i) acc[i + static_cast<std::size_t>(shift)] += x[i];
}

NPolynomial to_npoly(const Counts& c) {
  std::vector<Rational> v;
  v.reserve(c.size());
  for (auto x : c) v.emplace_back(static_cast<long long>(x));
  return NPolynomial(std::move(v));
}

// ---- memoized contraction -------------------------------------------------

constexpr std::uint8_t kClosed = 0xff;

struct State {
  std::uint32_t mask;
  std::array<std::uint8_t, kWickMemoLimit> label;
  bool operator==(const State& o) const { return mask == o.mask && label == o.label; }
};

struct StateHash {
  std::size_t operator()(const State& s) const noexcept {
    std::uint64_t h = s.mask * 0x9e3779b97f4a7c15ULL;
    for (auto b : s.label) h = (h ^ b) * 0x100000001b3ULL;
    return static_cast<std::size_t>(h);
  }
};

class Contractor {
 public:
  explicit Contractor(const Layout& lay) : lay_(lay) {}

  Counts solve(const State& s) {
    if (s.mask == 0) return Counts{1};
    auto it = memo_.find(s);
    if (it != memo_.end()) return it->second;
    Counts acc;
    int f = __builtin_ctz(s.mask);
    for (int g = f + 1; g < lay_.h; ++g) {
      if (!(s.mask >> g & 1u)) continue;
      branch(s, f, g, acc);
    }
    memo_.emplace(s, acc);
    return acc;
  }

  /// Both delta resolutions of pairing f with g, added into acc.
  void branch(const State& s, int f, int g, Counts& acc) {
    for (int r = 0; r < 2; ++r) {
      State t = s;
      t.mask &= ~((1u << f) | (1u << g));
      int a1 = lay_.left(f), b1 = r == 0 ? lay_.left(g) : lay_.right(g);
      int a2 = lay_.right(f), b2 = r == 0 ? lay_.right(g) : lay_.left(g);
      merge(t, a1, b1);
      merge(t, a2, b2);
      int closed = close(s, t);
      add_shifted(acc, solve(t), closed);
    }
  }

  std::size_t states() const { return memo_.size(); }

 private:
  static void merge(State& t, int a, int b) {
    std::uint8_t la = t.label[static_cast<std::size_t>(a)], lb = t.label[static_cast<std::size_t>(b)];
    if (la == lb) return;
    for (auto& x : t.label)
      if (x == lb) x = la;
  }

  // Drops variables no longer touching an unmatched factor, counts the
  // components that vanished and relabels the rest canonically.
  int close(const State& before, State& t) const {
    std::uint32_t seen_before = 0, seen_after = 0;
    std::array<std::uint8_t, 32> rename;
    rename.fill(kClosed);
    std::uint8_t nxt = 0;
    // Components are identified by the merged labels in t.
    for (int v = 0; v < lay_.h; ++v) {
      auto& l = t.label[static_cast<std::size_t>(v)];
      if (before.label[static_cast<std::size_t>(v)] == kClosed) continue;
      seen_before |= 1u << l;
      bool open = (t.mask >> v & 1u) || (t.mask >> lay_.prev[static_cast<std::size_t>(v)] & 1u);
      if (!open) {
        l = kClosed;
        continue;
      }
      seen_after |= 1u << l;
      if (rename[l] == kClosed) rename[l] = nxt++;
      l = rename[l];
    }
    return __builtin_popcount(seen_before) - __builtin_popcount(seen_after);
  }

  const Layout& lay_;
  std::unordered_map<State, Counts, StateHash> memo_;
};

// ---- plain enumeration ----------------------------------------------------

class Enumerator {
 public:
  explicit Enumerator(const Layout& lay) : lay_(lay) {}

  /// Pairs f with g, then completes the matching from the remaining factors.
  void pair(std::uint32_t mask, int f, int g, Counts& acc) {
    pairs_.emplace_back(f, g);
    complete(mask & ~((1u << f) | (1u << g)), acc);
    pairs_.pop_back();
  }

  std::uint64_t matchings_ = 0, resolutions_ = 0;

 private:
  void complete(std::uint32_t mask, Counts& acc) {
    if (mask == 0) {
      ++matchings_;
      resolve(acc);
      return;
    }
    int f = __builtin_ctz(mask);
    for (int g = f + 1; g < lay_.h; ++g)
      if (mask >> g & 1u) pair(mask, f, g, acc);
  }

  void resolve(Counts& acc) {
    const std::uint32_t m = static_cast<std::uint32_t>(pairs_.size());
    std::array<int, kWickEnumerateLimit> parent{};
    for (std::uint32_t r = 0; r < (1u << m); ++r) {
      for (int v = 0; v < lay_.h; ++v) parent[static_cast<std::size_t>(v)] = v;
      int comps = lay_.h;
      auto find = [&](int x) {
        while (parent[static_cast<std::size_t>(x)] != x) x = parent[static_cast<std::size_t>(x)];
        return x;
      };
      auto unite = [&](int a, int b) {
        a = find(a);
        b = find(b);
        if (a == b) return;
        parent[static_cast<std::size_t>(std::max(a, b))] = std::min(a, b);
        --comps;
      };
      for (std::uint32_t p = 0; p < m; ++p) {
        auto [f, g] = pairs_[p];
        bool twist = r >> p & 1u;
        unite(lay_.left(f), twist ? lay_.right(g) : lay_.left(g));
        unite(lay_.right(f), twist ? lay_.left(g) : lay_.right(g));
      }
      ++resolutions_;
      if (acc.size() <= static_cast<std::size_t>(comps)) acc.resize(static_cast<std::size_t>(comps) + 1, 0);
      ++acc[static_cast<std::size_t>(comps)];
    }
  }

  const Layout& lay_;
  std::vector<std::pair<int, int>> pairs_;
};

int worker_count(int threads, std::size_t jobs) {
  int n = threads > 0 ? threads : static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
  return static_cast<int>(std::min<std::size_t>(static_cast<std::size_t>(n), std::max<std::size_t>(jobs, 1)));
}

}  // namespace

NPolynomial wick_moment(const std::vector<int>& ks, WickMethod method, int threads, WickStats* stats) {
  for (int k : ks)
    if (k <= 0) throw std::invalid_argument("wick_moment: trace powers must be positive");
  Layout lay(ks);
  if (lay.h % 2 != 0) return {};
  if (lay.h == 0) return NPolynomial::constant(Rational(1));
  int limit = method == WickMethod::Memo ? kWickMemoLimit : kWickEnumerateLimit;
  if (lay.h > limit)
    throw SizeLimit("wick_moment: " + std::to_string(lay.h) + " half-edges exceeds the bound " + std::to_string(limit));

  const std::uint32_t full = lay.h == 32 ? ~0u : ((1u << lay.h) - 1);
  // Work is split by the partner of factor 0.
  std::vector<int> partners;
  for (int g = 1; g < lay.h; ++g) partners.push_back(g);
  std::atomic<std::size_t> next_job{0};
  std::mutex mu;
  Counts total;
  WickStats agg;

  auto work = [&] {
    Counts local;
    WickStats st;
    if (method == WickMethod::Memo) {
      Contractor c(lay);
      State s{full, {}};
      s.label.fill(kClosed);
      for (int v = 0; v < lay.h; ++v) s.label[static_cast<std::size_t>(v)] = static_cast<std::uint8_t>(v);
      for (std::size_t j; (j = next_job++) < partners.size();) c.branch(s, 0, partners[j], local);
      st.states = c.states();
    } else {
      Enumerator e(lay);
      for (std::size_t j; (j = next_job++) < partners.size();) e.pair(full, 0, partners[j], local);
      st.matchings = e.matchings_;
      st.resolutions = e.resolutions_;
    }
    std::lock_guard<std::mutex> lock(mu);
    add_shifted(total, local, 0);
    agg.matchings += st.matchings;
    agg.resolutions += st.resolutions;
    agg.states += st.states;
  };

  int n = worker_count(threads, partners.size());
  if (n == 1) {
    work();
  } else {
    std::vector<std::thread> pool;
    for (int i = 0; i < n; ++i) pool.emplace_back(work);
    for (auto& t : pool) t.join();
  }
  if (stats) *stats = agg;
  return to_npoly(total);
}

}  // namespace lomap
