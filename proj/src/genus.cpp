#include "lomap/genus.hpp"

#include <fcntl.h>
#include <sys/file.h>
#include <unistd.h>

#include <Eigen/Core>
#include <filesystem>
#include <fstream>
#include <sstream>

namespace lomap {

using QP = Poly<Rational>;

namespace {

AlgElem z2_alg() {
  static const AlgElem z2 = AlgElem(alg::z() * alg::z());
  return z2;
}

void trim(std::vector<AlgElem>& d) {
  while (!d.empty() && d.back().is_zero()) d.pop_back();
}

QSeries six_z_ddz(const QSeries& x) { return (diff(x) * Rational(6)).shifted(1); }

// Forward elimination with partial pivoting on the first nonzero entry, then back substitution.
std::vector<Rational> solve_exact(Eigen::Matrix<Rational, Eigen::Dynamic, Eigen::Dynamic> m, int unknowns, int* rank) {
  const int rows = static_cast<int>(m.rows());
  int r = 0;
  std::vector<int> pivot_col;
  for (int c = 0; c < unknowns && r < rows; ++c) {
    int p = -1;
    for (int i = r; i < rows; ++i)
      if (!m(i, c).is_zero()) {
        p = i;
        break;
      }
    if (p < 0) continue;
    if (p != r) m.row(p).swap(m.row(r));
    Rational inv = Rational(1) / m(r, c);
    for (int j = c; j <= unknowns; ++j) m(r, j) *= inv;
    for (int i = r + 1; i < rows; ++i) {
      if (m(i, c).is_zero()) continue;
      Rational f = m(i, c);
      for (int j = c; j <= unknowns; ++j)
        if (!m(r, j).is_zero()) m(i, j) -= f * m(r, j);
    }
    pivot_col.push_back(c);
    ++r;
  }
  *rank = r;
  for (int i = r; i < rows; ++i)
    if (!m(i, unknowns).is_zero()) throw Inconsistent("linear system has no solution (row " + std::to_string(i) + ")");
  if (r < unknowns) throw RankDeficient("rank " + std::to_string(r) + " < " + std::to_string(unknowns) + " unknowns");
  std::vector<Rational> x(static_cast<std::size_t>(unknowns));
  for (int i = r - 1; i >= 0; --i) {
    int c = pivot_col[static_cast<std::size_t>(i)];
    Rational v = m(i, unknowns);
    for (int j = c + 1; j < unknowns; ++j)
      if (!m(i, j).is_zero()) v -= m(i, j) * x[static_cast<std::size_t>(j)];
    x[static_cast<std::size_t>(c)] = v;
  }
  return x;
}

}  // namespace

LinearForm LinearForm::unknown() {
  LinearForm f;
  f.d.emplace_back(1);
  return f;
}

bool LinearForm::is_constant() const {
  for (const auto& x : d)
    if (!x.is_zero()) return false;
  return true;
}

AlgElem LinearForm::substitute(const AlgElem& l) const {
  AlgElem acc = c;
  AlgElem dl = l;
  for (std::size_t k = 0; k < d.size(); ++k) {
    if (k > 0) dl = apply_D(dl);
    if (!d[k].is_zero()) acc += d[k] * dl;
  }
  return acc;
}

LinearForm& LinearForm::operator+=(const LinearForm& o) {
  c += o.c;
  if (o.d.size() > d.size()) d.resize(o.d.size());
  for (std::size_t k = 0; k < o.d.size(); ++k) d[k] += o.d[k];
  trim(d);
  return *this;
}

LinearForm& LinearForm::operator-=(const LinearForm& o) {
  c -= o.c;
  if (o.d.size() > d.size()) d.resize(o.d.size());
  for (std::size_t k = 0; k < o.d.size(); ++k) d[k] -= o.d[k];
  trim(d);
  return *this;
}

LinearForm& LinearForm::operator*=(const Rational& r) {
  c *= r;
  for (auto& x : d) x *= r;
  trim(d);
  return *this;
}

LinearForm operator*(const LinearForm& a, const LinearForm& b) {
  bool ca = a.is_constant(), cb = b.is_constant();
  if (!ca && !cb) throw std::logic_error("LinearForm: product of two forms depending on the unknown");
  LinearForm r;
  r.c = a.c * b.c;
  const LinearForm& lin = ca ? b : a;
  const AlgElem& k = ca ? a.c : b.c;
  for (const auto& x : lin.d) r.d.push_back(x * k);
  trim(r.d);
  return r;
}

LinearForm apply_D(const LinearForm& x) {
  LinearForm r;
  r.c = apply_D(x.c);
  r.d.resize(x.d.size() + 1);
  for (std::size_t k = 0; k < x.d.size(); ++k) {
    r.d[k] += apply_D(x.d[k]);
    r.d[k + 1] += x.d[k];
  }
  trim(r.d);
  return r;
}

GenusTable::GenusTable() {
  rec_.push_back(GenusRecord{0, base_series(0), std::nullopt, "closed-form", true});
  rec_.push_back(GenusRecord{1, base_series(1), std::nullopt, "closed-form", true});
  cor_ = std::make_unique<GenusRecursion<AlgElem>>(
      [this](int i) { return t_series(i, *this); }, [this](int i) { return alg(i); },
      [](const AlgElem& x) { return apply_D(x); }, [](const AlgElem& x) { return x * z2_alg(); }, AlgElem());
}

const GenusRecord& GenusTable::record(int g) const {
  if (g < 0 || g > max_g()) throw MissingDependency("genus " + std::to_string(g) + " not in table (max " + std::to_string(max_g()) + ")");
  return rec_[static_cast<std::size_t>(g)];
}

QSeries GenusTable::zseries(int g, int order) const {
  const auto& r = record(g);
  if (r.psi) return psi_to_zseries(*r.psi, order);
  return alg_to_zseries(r.alg, order);
}

void GenusTable::push(GenusRecord r) {
  if (r.g != max_g() + 1) throw std::logic_error("GenusTable::push out of order");
  if (r.psi && r.alg.is_zero()) r.alg = r.psi->to_alg();
  rec_.push_back(std::move(r));
}

void GenusTable::extend_to(int g, const std::string& cache_dir, const std::function<void(int)>& progress) {
  for (int k = max_g() + 1; k <= g; ++k) {
    if (progress) progress(k);
    if (!cache_dir.empty()) {
      if (auto r = read_genus_cache(cache_dir, k)) {
        push(std::move(*r));
        continue;
      }
    }
    solve_genus(k, *this);
    if (!cache_dir.empty()) write_genus_cache(cache_dir, record(k));
  }
}

AlgElem t_series(int g, const GenusTable& table) {
  if (g < 0) return AlgElem();
  AlgElem l = table.alg(g);
  if (g == 0) {
    static const AlgElem extra = AlgElem(RatFunc(1) - (alg::z() * Rational(2)).inverse());
    return l + extra;
  }
  if (g == 1) return l + AlgElem(1);
  return l;
}

AlgElem v_coefficient(int k, GenusTable& table) {
  if (k > table.max_g()) throw MissingDependency("V_" + std::to_string(k) + " needs L_" + std::to_string(k));
  return table.recursion().Vk(k);
}

PsiVector solve_genus(int g, GenusTable& table) {
  if (g < 2) throw std::invalid_argument("solve_genus: g must be >= 2");
  if (g <= table.max_g()) {
    const auto& r = table.record(g);
    if (r.psi) return *r.psi;
  }
  if (table.max_g() < g - 1) throw MissingDependency("table must hold genus " + std::to_string(g - 1));

  GenusRecursion<AlgElem>& base = table.recursion();
  auto known = [&](int i) -> LinearForm {
    if (i == g) return LinearForm::unknown();
    return LinearForm(t_series(i, table));
  };
  auto known_l = [&](int i) -> LinearForm {
    if (i == g) return LinearForm::unknown();
    return LinearForm(table.alg(i));
  };
  GenusRecursion<LinearForm> lf(known, known_l, [](const LinearForm& x) { return apply_D(x); },
                           [](const LinearForm& x) { return x * LinearForm(z2_alg()); }, LinearForm());
  lf.delegate_below(g, [&](char kind, int i, int j) -> std::optional<LinearForm> {
    auto v = base.lookup(kind, i, j);
    if (!v) return std::nullopt;
    return LinearForm(*v);
  });
  LinearForm res = lf.residual(g);
  if (res.d.size() != 3) throw std::logic_error("unexpected operator order " + std::to_string(res.d.size()));

  // Scale so that the D^2 coefficient is 4/3; the other coefficients must then lie in the psi span.
  AlgElem nu = res.d[2].inverse() * Rational(4, 3);
  SolveInfo info;
  std::vector<PsiVector> dpsi_cache;
  for (int k = 0; k < 3; ++k)
    info.operator_constant[k] = alg_to_psi_affine(res.d[static_cast<std::size_t>(k)] * nu, &info.operator_scalar[k]);
  info.rhs = alg_to_psi(-(res.c * nu));

  const int n = 5 * g - 7;
  std::vector<PsiVector> cols;
  cols.reserve(static_cast<std::size_t>(n));
  int top = info.rhs.top_index();
  for (int j = 0; j < n; ++j) {
    PsiVector dk = PsiVector::unit(j);
    PsiVector col;
    for (int k = 0; k < 3; ++k) {
      if (k > 0) dk = apply_D(dk);
      col += dk * info.operator_scalar[k];
      col += psi_product(info.operator_constant[k], dk);
    }
    top = std::max(top, col.top_index());
    cols.push_back(std::move(col));
  }
  // Rows: psi coefficients 0..top, then [z^0] L_g = sum mu_i = 0.
  const int rows = top + 2;
  Eigen::Matrix<Rational, Eigen::Dynamic, Eigen::Dynamic> m(rows, n + 1);
  for (int i = 0; i < rows; ++i)
    for (int j = 0; j <= n; ++j) m(i, j) = Rational(0);
  for (int j = 0; j < n; ++j)
    for (const auto& [i, c] : cols[static_cast<std::size_t>(j)].entries()) m(i, j) = c;
  for (const auto& [i, c] : info.rhs.entries()) m(i, n) = c;
  for (int j = 0; j < n; ++j) m(rows - 1, j) = Rational(1);
  info.unknowns = n;
  info.equations = rows;
  auto x = solve_exact(m, n, &info.rank);

  PsiVector sol;
  for (int j = 0; j < n; ++j) sol.add(j, x[static_cast<std::size_t>(j)]);
  AlgElem l = sol.to_alg();
  if (!res.substitute(l).is_zero()) throw ResidualNonzero("substituted recursion residual at g = " + std::to_string(g));

  table.info_ = info;
  table.push(GenusRecord{g, l, sol, "solved", false});
  // Independent re-evaluation of both sides with the solved series in place.
  if (!base.residual(g).is_zero()) throw ResidualNonzero("raw recursion residual at g = " + std::to_string(g));
  table.rec_.back().residual_checked = true;
  return sol;
}

std::vector<Rational> coefficients(int g, int n_max, const GenusTable& table) {
  QSeries s = table.zseries(g, n_max);
  std::vector<Rational> out;
  for (int k = 1; k <= n_max; ++k) out.push_back(s.coeff(k));
  return out;
}

QSeries recursion_zseries_residual(int g, int order, const GenusTable& table) {
  auto lser = [&](int i) { return table.zseries(i, order); };
  auto tser = [&](int i) {
    QSeries l = lser(i);
    if (i == 0) l += QSeries::constant(Rational(1)) - QSeries::monomial(Rational(1, 2), -1);
    if (i == 1) l += QSeries::constant(Rational(1));
    return l;
  };
  GenusRecursion<QSeries> c(tser, lser, six_z_ddz, [](const QSeries& x) { return x.shifted(2); }, QSeries::zero());
  return c.residual(g);
}

namespace {

// Series in w with z-series coefficients, truncated after w^W.
struct Bi {
  std::vector<QSeries> c;
  explicit Bi(int w, int zt) : c(static_cast<std::size_t>(w + 1), QSeries::zero(zt)) {}
  int W() const { return static_cast<int>(c.size()) - 1; }
  Bi& operator+=(const Bi& o) {
    for (std::size_t k = 0; k < c.size(); ++k) c[k] += o.c[k];
    return *this;
  }
  Bi& operator-=(const Bi& o) {
    for (std::size_t k = 0; k < c.size(); ++k) c[k] -= o.c[k];
    return *this;
  }
  Bi operator*(const Rational& r) const {
    Bi b = *this;
    for (auto& x : b.c) x *= r;
    return b;
  }
  Bi operator*(const Bi& o) const {
    Bi r(W(), QSeries::kExact);
    for (int i = 0; i <= W(); ++i)
      for (int j = 0; i + j <= W(); ++j) r.c[static_cast<std::size_t>(i + j)] += c[static_cast<std::size_t>(i)] * o.c[static_cast<std::size_t>(j)];
    return r;
  }
  friend Bi operator+(Bi a, const Bi& b) { return a += b; }
  friend Bi operator-(Bi a, const Bi& b) { return a -= b; }
};

Bi bD(const Bi& x) {
  Bi r = x;
  for (auto& s : r.c) s = six_z_ddz(s);
  return r;
}
Bi bshift(const Bi& x, int k) { return bD(x) + x * Rational(k); }
Bi bz(const Bi& x, int p) {
  Bi r = x;
  for (auto& s : r.c) s = s.shifted(p);
  return r;
}
Bi bw2(const Bi& x) {
  Bi r(x.W(), QSeries::kExact);
  for (int k = x.W(); k >= 2; --k) r.c[static_cast<std::size_t>(k)] = x.c[static_cast<std::size_t>(k - 2)];
  return r;
}

std::optional<std::pair<int, int>> first_nonzero(const Bi& r, int z_order, int g_max) {
  for (int k = 0; k <= std::min(g_max, r.W()); ++k) {
    const QSeries& s = r.c[static_cast<std::size_t>(k)];
    if (s.truncation() <= z_order) throw TruncationError("master residual truncated too early");
    for (int n = std::min(s.valuation(), 0); n <= z_order; ++n)
      if (!s.coeff(n).is_zero()) return std::make_pair(n, k);
  }
  return std::nullopt;
}

}  // namespace

MasterReport residual_master(int g_max, int z_order, GenusTable& table) {
  MasterReport rep;
  rep.g_max = g_max;
  rep.z_order = z_order;
  if (z_order <= 0 && g_max < 0) return rep;
  const int W = g_max;
  const int zo = std::max(z_order, 0) + 3;
  const int zt = zo + 1;
  table.extend_to(W + 2);

  std::vector<QSeries> lz;
  for (int g = 0; g <= W + 2; ++g) lz.push_back(table.zseries(g, zo));

  Bi T(W, zt), L(W + 2, zt);
  for (int g = 0; g <= W + 2; ++g) L.c[static_cast<std::size_t>(g)] = lz[static_cast<std::size_t>(g)];
  for (int g = 0; g <= W; ++g) {
    QSeries t = lz[static_cast<std::size_t>(g)];
    if (g == 0) t += QSeries::constant(Rational(1)) - QSeries::monomial(Rational(1, 2), -1);
    if (g == 1) t += QSeries::constant(Rational(1));
    T.c[static_cast<std::size_t>(g)] = t;
  }
  // A(+-) = (1 +- 2w)^2 L(z(1 +- 2w), w/(1 +- 2w)): l_g(n) z^n w^g (1 +- 2w)^{n-g+2}.
  Bi acc(W + 2, QSeries::kExact);
  for (int sign : {1, -1}) {
    for (int g = 0; g <= W + 2; ++g) {
      const QSeries& s = lz[static_cast<std::size_t>(g)];
      for (int n = 1; n <= zo; ++n) {
        Rational l = s.coeff(n);
        if (l.is_zero()) continue;
        for (int j = 0; g + j <= W + 2; ++j) {
          Rational b = binomial(n - g + 2, j) * pow(Rational(2 * sign), j);
          acc.c[static_cast<std::size_t>(g + j)] += QSeries::monomial(l * b, n);
        }
      }
    }
  }
  acc -= L * Rational(2);
  for (auto& s : acc.c) s = s.truncated(zt);
  if (!acc.c[0].is_zero() || !acc.c[1].is_zero()) {
    rep.pass = false;
    rep.first_failure = std::make_pair(-1, -1);
  }
  Bi V(W, zt);
  for (int k = 0; k <= W; ++k) V.c[static_cast<std::size_t>(k)] = acc.c[static_cast<std::size_t>(k + 2)];

  Bi U = bshift(T, 4);
  Bi Wt = bshift(bshift(U, 8), 12);
  Bi U2 = U * U;
  Bi lhs = bz(bw2(bshift(Wt, 12)), 2) * Rational(4) - bshift(bD(T), 6) + bz(bshift(U2, 12), 2) * Rational(12);
  Bi common = bz(bw2(Wt), 2) * Rational(2) - bshift(T, 6) * Rational(1, 2);
  Bi rhs = V * (common + bz(U2, 2) * Rational(6));
  Bi rhs_variant = V * (common + bz(U2, 1) * Rational(6));

  if (auto f = first_nonzero(lhs - rhs, z_order, g_max)) {
    rep.pass = false;
    rep.first_failure = f;
  }
  rep.proof_line_variant_failure = first_nonzero(lhs - rhs_variant, z_order, g_max);
  rep.proof_line_variant_pass = !rep.proof_line_variant_failure.has_value();

  for (int k = 0; k <= std::min(W, 4); ++k) {
    QSeries vk = alg_to_zseries(v_coefficient(k, table), z_order);
    const QSeries& sub = V.c[static_cast<std::size_t>(k)];
    for (int n = 0; n <= z_order; ++n)
      if (vk.coeff(n) != sub.coeff(n)) rep.v_match = false;
  }
  rep.pass = rep.pass && rep.v_match;
  return rep;
}

std::string genus_cache_path(const std::string& cache_dir, int g) {
  return (std::filesystem::path(cache_dir) / "genus" / ("g_" + std::to_string(g) + ".json")).string();
}

nlohmann::json genus_cache_json(const GenusRecord& r) {
  nlohmann::json psi = nlohmann::json::array();
  if (r.psi)
    for (const auto& [i, c] : r.psi->entries()) psi.push_back({std::to_string(i), c.str()});
  return {{"g", r.g}, {"psi", psi}, {"residual_checked", r.residual_checked}};
}

namespace {

class DirLock {
 public:
  DirLock(const std::filesystem::path& dir, int mode) {
    std::filesystem::create_directories(dir);
    fd_ = ::open((dir / ".lock").c_str(), O_RDWR | O_CREAT, 0644);
    if (fd_ >= 0) ::flock(fd_, mode);
  }
  ~DirLock() {
    if (fd_ >= 0) {
      ::flock(fd_, LOCK_UN);
      ::close(fd_);
    }
  }
  DirLock(const DirLock&) = delete;
  DirLock& operator=(const DirLock&) = delete;

 private:
  int fd_ = -1;
};

}  // namespace

void write_genus_cache(const std::string& cache_dir, const GenusRecord& r) {
  if (!r.psi) return;
  auto dir = std::filesystem::path(cache_dir) / "genus";
  DirLock lock(dir, LOCK_EX);
  auto path = genus_cache_path(cache_dir, r.g);
  auto tmp = path + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary);
    out << genus_cache_json(r).dump() << "\n";
  }
  std::filesystem::rename(tmp, path);
}

std::optional<GenusRecord> read_genus_cache(const std::string& cache_dir, int g) {
  auto path = genus_cache_path(cache_dir, g);
  if (!std::filesystem::exists(path)) return std::nullopt;
  DirLock lock(std::filesystem::path(cache_dir) / "genus", LOCK_SH);
  std::ifstream in(path);
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception&) {
    return std::nullopt;
  }
  if (j.value("g", -1) != g) return std::nullopt;
  GenusRecord r;
  r.g = g;
  r.psi = psi_from_json(j.at("psi"));
  r.alg = r.psi->to_alg();
  r.provenance = "cached";
  r.residual_checked = j.value("residual_checked", false);
  return r;
}

}  // namespace lomap
