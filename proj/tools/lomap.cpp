// lomap: command-line front end.
//
//   lomap genus --g 4 --expand 10 --cache-dir .cache
//   lomap constants --max 12 --check-routes
//   lomap verify bkp --weight 9
//
// Exit codes: 0 pass, 1 usage, 2 verification failure, 3 resource limit.

#include <CLI11.hpp>
#include <iostream>
#include <json.hpp>
#include <sstream>
#include <string>

#include "lomap/algebraic.hpp"
#include "lomap/asymptotics.hpp"
#include "lomap/errors.hpp"
#include "lomap/genus.hpp"
#include "lomap/oracle.hpp"
#include "lomap/serialize.hpp"

using namespace lomap;
using json = nlohmann::json;

namespace {

enum Exit { kPass = 0, kUsage = 1, kFail = 2, kLimit = 3 };

struct Config {
  int g = -1;
  int max = 0;
  int expand = 0;
  int weight = 9;
  int vmax = 4;
  int order = -1;
  int dim = 10;
  int trials = 100;
  std::uint64_t seed = 20240601;
  std::string format = "json";
  std::string cache_dir;
  bool check_routes = false;
  std::string which;
};

// CSV writer: header row, LF line endings.
class Csv {
 public:
  explicit Csv(std::initializer_list<std::string> header) { row(std::vector<std::string>(header)); }
  void row(const std::vector<std::string>& cells) {
    for (std::size_t i = 0; i < cells.size(); ++i) {
      if (i) os_ << ',';
      const auto& c = cells[i];
      if (c.find_first_of(",\"\n") != std::string::npos) {
        os_ << '"';
        for (char ch : c) os_ << (ch == '"' ? "\"\"" : std::string(1, ch));
        os_ << '"';
      } else {
        os_ << c;
      }
    }
    os_ << '\n';
  }
  std::string str() const { return os_.str(); }

 private:
  std::ostringstream os_;
};

void emit(const json& j) { std::cout << j.dump(2) << '\n'; }

std::string fmt_double(double x) {
  std::ostringstream os;
  os.precision(17);
  os << x;
  return os.str();
}

json psi_strings(const PsiVector& p) {
  json a = json::array();
  for (const auto& [i, c] : p.entries()) a.push_back({std::to_string(i), c.str()});
  return a;
}

void extend(GenusTable& table, int g, const Config& cfg) {
  table.extend_to(g, cfg.cache_dir, [](int k) {
    if (k >= 2) std::cerr << "genus " << k << '\n';
  });
}

int cmd_genus(const Config& cfg) {
  GenusTable table;
  extend(table, cfg.g, cfg);
  const auto& rec = table.record(cfg.g);
  std::vector<Rational> counts;
  if (cfg.expand > 0) counts = coefficients(cfg.g, cfg.expand, table);

  if (cfg.format == "csv") {
    if (cfg.expand > 0) {
      Csv csv{"g", "n", "count"};
      for (std::size_t n = 0; n < counts.size(); ++n)
        csv.row({std::to_string(cfg.g), std::to_string(n + 1), counts[n].str()});
      std::cout << csv.str();
    } else {
      if (!rec.psi) {
        std::cerr << "genus " << cfg.g << " has no psi expansion; use --expand or --format json\n";
        return kUsage;
      }
      Csv csv{"g", "index", "coefficient"};
      for (const auto& [i, c] : rec.psi->entries()) csv.row({std::to_string(cfg.g), std::to_string(i), c.str()});
      std::cout << csv.str();
    }
    return kPass;
  }

  json out{{"g", cfg.g}, {"provenance", rec.provenance}, {"residual_checked", rec.residual_checked}};
  if (rec.psi)
    out["psi"] = psi_strings(*rec.psi);
  else
    out["alg"] = to_json(rec.alg);
  if (cfg.expand > 0) {
    json a = json::array();
    for (std::size_t n = 0; n < counts.size(); ++n) a.push_back({{"n", n + 1}, {"count", counts[n].str()}});
    out["expansion"] = a;
  }
  emit(out);
  return kPass;
}

int cmd_constants(const Config& cfg) {
  const int G = cfg.max;
  ConstTables t = build_tables(G);
  auto trim = [G](auto v) {
    v.resize(std::min(v.size(), static_cast<std::size_t>(G) + 1));
    return v;
  };
  t.u = trim(t.u);
  t.v = trim(t.v);
  t.beta = trim(t.beta);
  auto mc = map_constants(G, t);

  bool routes_ok = true;
  json routes;
  if (cfg.check_routes) {
    auto u = u_coeffs(G + 2);
    auto uv = beta_from_uv(G, u, v_coeffs(G + 2, u));
    GenusTable table;
    extend(table, std::max(G, 1), cfg);
    json rows = json::array();
    for (int g = 2; g <= G; ++g) {
      QRoot3 a = t.beta[static_cast<std::size_t>(g)], b = uv[static_cast<std::size_t>(g)], c = beta_from_genus(g, table);
      bool ok = a == b && b == c;
      routes_ok = routes_ok && ok;
      rows.push_back({{"g", g}, {"recursion", a.str()}, {"uv", b.str()}, {"genus", c.str()}, {"agree", ok}});
    }
    routes = {{"status", routes_ok ? "pass" : "fail"}, {"rows", rows}};
  }

  if (cfg.format == "csv") {
    Csv csv{"table", "index", "exact", "float_approx"};
    auto put = [&](const std::string& name, const auto& xs) {
      for (std::size_t i = 0; i < xs.size(); ++i) {
        QRoot3 q(xs[i]);
        csv.row({name, std::to_string(i), q.str(), fmt_double(q.to_double())});
      }
    };
    put("u", t.u);
    put("v", t.v);
    put("beta", t.beta);
    put("mu", t.mu);
    put("nu", t.nu);
    for (const auto& m : mc) {
      csv.row({"t_variant_a", std::to_string(m.g), "", fmt_double(m.t_variant_a)});
      csv.row({"t_variant_b", std::to_string(m.g), "", fmt_double(m.t_variant_b)});
      if (m.p) csv.row({"p", std::to_string((m.g + 1) / 2), "", fmt_double(*m.p)});
    }
    std::cout << csv.str();
  } else {
    json out = tables_to_json(t);
    json mj = json::array();
    for (const auto& m : mc) {
      json row{{"g", m.g}, {"t_variant_a_approx", m.t_variant_a}, {"t_variant_b_approx", m.t_variant_b}};
      if (m.p) row["p_index"] = (m.g + 1) / 2, row["p_approx"] = *m.p;
      mj.push_back(row);
    }
    out["map_constants"] = mj;
    if (cfg.check_routes) out["beta_routes"] = routes;
    emit(out);
  }
  return routes_ok ? kPass : kFail;
}

int cmd_verify(const Config& cfg) {
  const std::string& w = cfg.which;
  if (w == "bkp") {
    auto proof = verify_bkp(cfg.weight, BkpVariant::Proof);
    auto stmt = verify_bkp(cfg.weight, BkpVariant::Statement);
    emit(json::array({proof.to_json(), stmt.to_json()}));
    return proof.pass ? kPass : kFail;
  }
  if (w == "virasoro") {
    auto r = verify_virasoro(cfg.weight);
    emit(r.to_json());
    return r.pass ? kPass : kFail;
  }
  if (w == "y-reductions") {
    auto r = verify_y_reductions(cfg.order < 0 ? 4 : cfg.order);
    emit(r.to_json());
    return r.pass ? kPass : kFail;
  }
  if (w == "pfaffian") {
    std::vector<VerifyReport> reps{verify_pfaffian_det(cfg.trials, cfg.dim, cfg.seed)};
    for (int m = 1; m <= 2; ++m)
      for (int n = 0; n <= 2; ++n) reps.push_back(verify_pfaffian_quadratic(m, n, cfg.seed + static_cast<std::uint64_t>(3 * m + n)));
    for (int dim = 2; dim <= std::min(cfg.dim, 6); dim += 2)
      for (int k = 1; k <= 3; ++k) reps.push_back(verify_pfaffian_derivative(k, dim));
    json a = json::array();
    bool ok = true;
    for (const auto& r : reps) {
      a.push_back(r.to_json());
      ok = ok && r.pass;
    }
    emit(a);
    return ok ? kPass : kFail;
  }
  if (w == "master") {
    GenusTable table;
    int g_max = cfg.max > 0 ? cfg.max : 4;
    int z_order = cfg.order < 0 ? 6 : cfg.order;
    extend(table, g_max + 2, cfg);
    auto rep = residual_master(g_max, z_order, table);
    json out{{"check", "master"}, {"variant", "statement"}, {"max_weight", g_max}, {"z_order", z_order},
             {"status", rep.pass && rep.v_match ? "pass" : "fail"}, {"seed", nullptr}, {"v_match", rep.v_match}};
    out["first_failure"] = rep.first_failure
                               ? json("z^" + std::to_string(rep.first_failure->first) + " w^" +
                                      std::to_string(rep.first_failure->second))
                               : json();
    out["proof_line_variant"] = {{"status", rep.proof_line_variant_pass ? "pass" : "fail"}};
    if (rep.proof_line_variant_failure)
      out["proof_line_variant"]["first_failure"] = "z^" + std::to_string(rep.proof_line_variant_failure->first) +
                                                   " w^" + std::to_string(rep.proof_line_variant_failure->second);
    emit(out);
    return rep.pass && rep.v_match ? kPass : kFail;
  }
  if (w == "oracle-counts") {
    if (cfg.vmax % 2 != 0 || cfg.vmax < 2) {
      std::cerr << "--vmax must be even and at least 2\n";
      return kUsage;
    }
    auto L = map_series_oracle(cfg.vmax);
    GenusTable table;
    extend(table, 2 + cfg.vmax / 2, cfg);
    bool ok = true;
    json rows = json::array();
    for (const auto& [v, c] : L) {
      auto split = genus_split(v, c);
      json row{{"V", v}, {"oracle", json::array()}, {"engine", json::array()}};
      for (std::size_t g = 0; g < split.size(); ++g) {
        Rational e = table.zseries(static_cast<int>(g), v / 2).coeff(v / 2);
        row["oracle"].push_back(split[g].str());
        row["engine"].push_back(e.str());
        ok = ok && e == split[g];
      }
      rows.push_back(row);
    }
    emit({{"check", "oracle-counts"}, {"variant", "genus-split"}, {"max_weight", 3 * cfg.vmax},
          {"status", ok ? "pass" : "fail"}, {"first_failure", nullptr}, {"seed", nullptr}, {"rows", rows}});
    return ok ? kPass : kFail;
  }
  std::cerr << "unknown verification: " << w << '\n';
  return kUsage;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Locally orientable cubic map series, constants and verifications"};
  app.require_subcommand(1);
  Config cfg;

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--format", cfg.format, "Output format")->check(CLI::IsMember({"json", "csv"}));
    sub->add_option("--cache-dir", cfg.cache_dir, "Genus cache directory");
  };

  auto* genus = app.add_subcommand("genus", "Solve for L_g and print its psi coefficients");
  genus->add_option("--g", cfg.g, "Genus index")->required()->check(CLI::NonNegativeNumber);
  genus->add_option("--expand", cfg.expand, "Print [z^n] L_g for n = 1..N")->check(CLI::NonNegativeNumber);
  add_common(genus);

  auto* constants = app.add_subcommand("constants", "Tables of u, v, beta, mu, nu and map constants");
  constants->add_option("--max", cfg.max, "Largest index")->check(CLI::NonNegativeNumber);
  constants->add_flag("--check-routes", cfg.check_routes, "Compare the three beta routes");
  add_common(constants);

  auto* verify = app.add_subcommand("verify", "Run a verification and print its JSON report");
  verify->add_option("which", cfg.which, "bkp, virasoro, master, pfaffian, y-reductions or oracle-counts")
      ->required()
      ->check(CLI::IsMember({"bkp", "virasoro", "master", "pfaffian", "y-reductions", "oracle-counts"}));
  verify->add_option("--weight", cfg.weight, "Graded weight bound")->check(CLI::PositiveNumber);
  verify->add_option("--vmax", cfg.vmax, "Largest vertex count")->check(CLI::PositiveNumber);
  verify->add_option("--order", cfg.order, "x or z order")->check(CLI::PositiveNumber);
  verify->add_option("--max", cfg.max, "Largest genus for master")->check(CLI::PositiveNumber);
  verify->add_option("--dim", cfg.dim, "Largest pfaffian dimension")->check(CLI::Range(2, 20));
  verify->add_option("--trials", cfg.trials, "Random pfaffian trials")->check(CLI::PositiveNumber);
  verify->add_option("--seed", cfg.seed, "Random seed");
  add_common(verify);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kUsage;
  }

  try {
    if (*genus) return cmd_genus(cfg);
    if (*constants) return cmd_constants(cfg);
    if (*verify) return cmd_verify(cfg);
  } catch (const SizeLimit& e) {
    std::cerr << "resource limit: " << e.what() << '\n';
    return kLimit;
  } catch (const std::bad_alloc&) {
    std::cerr << "resource limit: out of memory\n";
    return kLimit;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kFail;
  }
  return kUsage;
}
