#include "domlab/catalog.hpp"

#include <cmath>
#include <memory>
#include <numbers>

namespace domlab {

namespace {

Eigen::MatrixXi mat2(int a, int b, int c, int d) {
  Eigen::MatrixXi m(2, 2);
  m << a, b, c, d;
  return m;
}

std::map<std::string, double> merged_params(const CatalogEntry& e,
                                            const std::map<std::string, double>& overrides) {
  std::map<std::string, double> out;
  for (const auto& p : e.params) out[p.name] = p.default_value;
  for (const auto& [k, v] : overrides) {
    const ParamSpec* spec = nullptr;
    for (const auto& p : e.params)
      if (p.name == k) spec = &p;
    if (!spec)
      throw ValidationError("system '" + e.id + "' has no parameter '" + k + "'");
    if (v < spec->min || v > spec->max)
      throw ValidationError("parameter '" + k + "' out of range for system '" +
                            e.id + "'");
    out[k] = v;
  }
  return out;
}

std::vector<CatalogEntry> build_catalog() {
  using std::numbers::pi;
  const double sqrt5 = std::sqrt(5.0);
  const double cat_exp = std::log((3.0 + sqrt5) / 2.0);
  const double cat_tau = (3.0 - sqrt5) / (3.0 + sqrt5);
  // Roots of x^3 - 5x^2 + 6x - 1, the spectrum of the symmetric entry below.
  const double mu1 = 4.0 * std::pow(std::cos(pi / 7.0), 2);
  const double mu2 = 4.0 * std::pow(std::cos(2.0 * pi / 7.0), 2);
  const double mu3 = 4.0 * std::pow(std::cos(3.0 * pi / 7.0), 2);
  // Real root of x^3 - x^2 - x - 1; the complex pair has modulus sqrt(1/t).
  const double trib = 1.8392867552141612;

  std::vector<CatalogEntry> entries;

  {
    CatalogEntry e;
    e.id = "cat2";
    e.description = "hyperbolic automorphism of T^2, matrix [[2,1],[1,1]]";
    e.dim = 2;
    e.dim_cu = 1;
    e.facts = {{"expansion_log", cat_exp, "closed-form eigenvalue"},
               {"contraction_log", -cat_exp, "closed-form eigenvalue"},
               {"domination_rate", cat_tau, "closed-form eigenvalue ratio"}};
    e.build = [](const std::map<std::string, double>&) -> MapPtr {
      return std::make_shared<LinearTorusMap>("cat2", mat2(2, 1, 1, 1));
    };
    entries.push_back(std::move(e));
  }
  {
    CatalogEntry e;
    e.id = "cat3";
    e.description =
        "hyperbolic automorphism of T^3 with one expanding direction and a "
        "contracting complex pair";
    e.dim = 3;
    e.dim_cu = 1;
    e.facts = {{"expansion_log", std::log(trib), "closed-form eigenvalue"},
               {"contraction_log", -0.5 * std::log(trib), "closed-form eigenvalue"},
               {"domination_rate", std::exp(-1.5 * std::log(trib)),
                "closed-form eigenvalue ratio"}};
    e.build = [](const std::map<std::string, double>&) -> MapPtr {
      Eigen::MatrixXi m(3, 3);
      m << 1, 1, 1, 1, 0, 0, 0, 1, 0;
      return std::make_shared<LinearTorusMap>("cat3", m);
    };
    entries.push_back(std::move(e));
  }
  {
    CatalogEntry e;
    e.id = "sym3";
    e.description =
        "symmetric hyperbolic automorphism of T^3 with a 2-dimensional "
        "expanding bundle and orthogonal eigenvectors";
    e.dim = 3;
    e.dim_cu = 2;
    e.facts = {{"mu1", mu1, "closed-form eigenvalue"},
               {"mu2", mu2, "closed-form eigenvalue"},
               {"mu3", mu3, "closed-form eigenvalue"},
               {"expansion_log_1", std::log(mu1), "closed-form eigenvalue"},
               {"expansion_log_2", std::log(mu2), "closed-form eigenvalue"},
               {"contraction_log", std::log(mu3), "closed-form eigenvalue"},
               {"domination_rate", mu3 / mu2, "closed-form eigenvalue ratio"}};
    e.build = [](const std::map<std::string, double>&) -> MapPtr {
      Eigen::MatrixXi m(3, 3);
      m << 2, 1, 1, 1, 2, 0, 1, 0, 1;
      return std::make_shared<LinearTorusMap>("sym3", m);
    };
    entries.push_back(std::move(e));
  }
  {
    CatalogEntry e;
    e.id = "cat4";
    e.description =
        "product of two plane cat maps on T^4; the expanding bundle is "
        "2-dimensional and conformally stretched";
    e.dim = 4;
    e.dim_cu = 2;
    e.facts = {{"expansion_log", cat_exp, "closed-form eigenvalue"},
               {"contraction_log", -cat_exp, "closed-form eigenvalue"},
               {"domination_rate", cat_tau, "closed-form eigenvalue ratio"}};
    e.build = [](const std::map<std::string, double>&) -> MapPtr {
      Eigen::MatrixXi m = Eigen::MatrixXi::Zero(4, 4);
      m.block(0, 0, 2, 2) = mat2(2, 1, 1, 1);
      m.block(2, 2, 2, 2) = mat2(2, 1, 1, 1);
      return std::make_shared<LinearTorusMap>("cat4", m);
    };
    entries.push_back(std::move(e));
  }
  {
    CatalogEntry e;
    e.id = "cat2xid";
    e.description =
        "plane cat map times the identity circle on T^3; non-ergodic, the "
        "neutral direction sits inside the cs bundle";
    e.dim = 3;
    e.dim_cu = 1;
    e.facts = {{"expansion_log", cat_exp, "closed-form eigenvalue"},
               {"neutral_log", 0.0, "closed-form eigenvalue"},
               {"contraction_log", -cat_exp, "closed-form eigenvalue"}};
    e.build = [](const std::map<std::string, double>&) -> MapPtr {
      Eigen::MatrixXi m(3, 3);
      m << 2, 1, 0, 1, 1, 0, 0, 0, 1;
      return std::make_shared<LinearTorusMap>("cat2xid", m);
    };
    entries.push_back(std::move(e));
  }
  {
    CatalogEntry e;
    e.id = "cat2shear";
    e.description =
        "plane cat map followed by a conservative shear of amplitude eps";
    e.dim = 2;
    e.dim_cu = 1;
    e.params = {{"eps", 0.01, -0.5, 0.5}};
    e.build = [](const std::map<std::string, double>& p) -> MapPtr {
      auto lin = std::make_shared<LinearTorusMap>("cat2", mat2(2, 1, 1, 1));
      Eigen::VectorXi wave(2);
      wave << 1, 0;
      auto shear = std::make_shared<ShearTorusMap>("shear_y", 2, 1, wave,
                                                   p.at("eps"));
      return std::make_shared<ComposedTorusMap>(
          "cat2shear", std::vector<MapPtr>{lin, shear}, p);
    };
    entries.push_back(std::move(e));
  }
  {
    CatalogEntry e;
    e.id = "sym3shear";
    e.description =
        "symmetric T^3 automorphism followed by a conservative shear of "
        "amplitude eps";
    e.dim = 3;
    e.dim_cu = 2;
    e.params = {{"eps", 0.01, -0.5, 0.5}};
    e.build = [](const std::map<std::string, double>& p) -> MapPtr {
      Eigen::MatrixXi m(3, 3);
      m << 2, 1, 1, 1, 2, 0, 1, 0, 1;
      auto lin = std::make_shared<LinearTorusMap>("sym3", m);
      Eigen::VectorXi wave(3);
      wave << 1, 1, 0;
      auto shear = std::make_shared<ShearTorusMap>("shear_z", 3, 2, wave,
                                                   p.at("eps"));
      return std::make_shared<ComposedTorusMap>(
          "sym3shear", std::vector<MapPtr>{lin, shear}, p);
    };
    entries.push_back(std::move(e));
  }

  return entries;
}

}  // namespace

double CatalogEntry::fact(const std::string& fact_name) const {
  for (const auto& f : facts)
    if (f.name == fact_name) return f.value;
  throw UnknownIdentifier("system '" + id + "' has no fact '" + fact_name + "'");
}

const std::vector<CatalogEntry>& catalog() {
  static const std::vector<CatalogEntry> entries = build_catalog();
  return entries;
}

const CatalogEntry& catalog_entry(const std::string& id) {
  for (const auto& e : catalog())
    if (e.id == id) return e;
  throw UnknownIdentifier("unknown system identifier '" + id + "'");
}

MapPtr make_system(const std::string& id,
                   const std::map<std::string, double>& overrides) {
  const CatalogEntry& e = catalog_entry(id);
  return e.build(merged_params(e, overrides));
}

}  // namespace domlab
