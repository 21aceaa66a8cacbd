#include "calabi/profile.hpp"

#include <cmath>
#include <cstring>
#include <fstream>
#include <limits>

#include <nlohmann/json.hpp>

#include "calabi/errors.hpp"

namespace calabi {

RadialProfile::RadialProfile(std::shared_ptr<const Grid> grid, double a, double b,
                             std::vector<double> psi)
    : grid_(std::move(grid)), a_(a), b_(b), psi_(std::move(psi)) {
  if (!(a_ > 0.0) || !(a_ < b_))
    throw invalid_coefficients("profile coefficients must satisfy 0 < a < b");
  if (static_cast<int>(psi_.size()) != grid_->N())
    throw std::invalid_argument("psi size does not match grid");
  for (int m = 1; m <= 4; ++m) psi_s_[m - 1] = grid_->diff(psi_, m);
}

double RadialProfile::uhat(int j) const {
  const Grid& g = *grid_;
  const int N = g.N();
  if (j <= 0) return -std::numeric_limits<double>::infinity();
  if (j >= N - 1) return std::numeric_limits<double>::infinity();
  const double s = g.sigma(j), oms = g.omsigma(j);
  const double k = g.k();
  // a rho + ((b-a)/k) log(e^{k rho}+1), normalized so uhat(0) = 0; the
  // log(2 sigma) form makes the midpoint value an exact zero.
  return (a_ / k) * std::log(2.0 * s) - (b_ / k) * std::log(2.0 * oms);
}

bool RadialProfile::admissible(int* bad_node) const {
  const int N = grid_->N();
  for (int j = 0; j < N; ++j) {
    if (!(u1(j) > 0.0) || !(W(j) > 0.0)) {
      if (bad_node) *bad_node = j;
      return false;
    }
  }
  return true;
}

RadialProfile reference_profile(double a, double b, std::shared_ptr<const Grid> grid) {
  if (!(a > 0.0) || !(a < b))
    throw invalid_coefficients("reference profile needs 0 < a < b");
  std::vector<double> psi(grid->N(), 0.0);
  return RadialProfile(std::move(grid), a, b, std::move(psi));
}

std::vector<double> derivatives(const RadialProfile& p, int order) {
  if (order < 1 || order > 4) throw std::invalid_argument("derivative order must be 1..4");
  const int N = p.grid().N();
  std::vector<double> out(N);
  switch (order) {
    case 1:
      for (int j = 0; j < N; ++j) out[j] = p.u1(j);
      break;
    case 2:
      for (int j = 0; j < N; ++j) out[j] = p.u2(j);
      break;
    case 3:
      for (int j = 0; j < N; ++j) out[j] = p.u3(j);
      break;
    case 4:
      for (int j = 0; j < N; ++j) out[j] = p.u4(j);
      break;
  }
  return out;
}

CalabiReport validate_calabi(const RadialProfile& p) {
  const Grid& g = p.grid();
  const int N = g.N();
  CalabiReport rep;
  rep.min_u1 = std::numeric_limits<double>::infinity();
  rep.min_u2_interior = std::numeric_limits<double>::infinity();
  rep.min_detg_factor = std::numeric_limits<double>::infinity();
  for (int j = 0; j < N; ++j) {
    const double u1 = p.u1(j);
    if (u1 < rep.min_u1) {
      rep.min_u1 = u1;
      rep.min_u1_node = j;
    }
    if (j > 0 && j < N - 1) {
      const double u2 = p.u2(j);
      if (u2 < rep.min_u2_interior) {
        rep.min_u2_interior = u2;
        rep.min_u2_node = j;
      }
      rep.min_detg_factor = std::min(rep.min_detg_factor, u1 * p.W(j));
    }
    rep.max_abs_psi = std::max(rep.max_abs_psi, std::abs(p.psi()[j]));
    rep.max_abs_psi_s1 = std::max(rep.max_abs_psi_s1, std::abs(p.psi_deriv(1)[j]));
    rep.max_abs_psi_s2 = std::max(rep.max_abs_psi_s2, std::abs(p.psi_deriv(2)[j]));
  }
  rep.normalization_residual = std::abs(p.psi()[g.mid()]);
  rep.admissible = rep.min_u1 > 0.0 && rep.min_u2_interior > 0.0;
  rep.normalized = rep.normalization_residual <= 1e-12 * std::max(1.0, rep.max_abs_psi);
  rep.divisor_smooth = std::isfinite(rep.max_abs_psi) && std::isfinite(rep.max_abs_psi_s1) &&
                       std::isfinite(rep.max_abs_psi_s2);
  return rep;
}

void save_profile_json(const std::filesystem::path& path, const RadialProfile& p, int n) {
  nlohmann::json j;
  j["format"] = "calabi-profile";
  j["n"] = n;
  j["k"] = p.grid().k();
  j["a"] = p.a();
  j["b"] = p.b();
  j["N"] = p.grid().N();
  j["psi"] = p.psi();
  std::ofstream out(path);
  if (!out) throw output_error("cannot write " + path.string());
  out << j.dump();
  out << "\n";
}

namespace {

void put_i64(std::ofstream& out, std::int64_t v) {
  char buf[8];
  std::memcpy(buf, &v, 8);
  out.write(buf, 8);
}

void put_f64(std::ofstream& out, double v) {
  char buf[8];
  std::memcpy(buf, &v, 8);
  out.write(buf, 8);
}

std::int64_t get_i64(std::ifstream& in) {
  char buf[8];
  in.read(buf, 8);
  std::int64_t v;
  std::memcpy(&v, buf, 8);
  return v;
}

double get_f64(std::ifstream& in) {
  char buf[8];
  in.read(buf, 8);
  double v;
  std::memcpy(&v, buf, 8);
  return v;
}

}  // namespace

void save_profile_calu(const std::filesystem::path& path, const RadialProfile& p, int n) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw output_error("cannot write " + path.string());
  out.write("CALU", 4);
  put_i64(out, 1);  // version
  put_i64(out, p.grid().N());
  put_i64(out, n);
  put_i64(out, p.grid().k());
  put_f64(out, p.a());
  put_f64(out, p.b());
  for (double v : p.psi()) put_f64(out, v);
}

StoredProfile load_profile(const std::filesystem::path& path) {
  std::ifstream probe(path, std::ios::binary);
  if (!probe) throw run_dir_error("cannot open " + path.string());
  char magic[4] = {};
  probe.read(magic, 4);
  probe.close();

  if (std::memcmp(magic, "CALU", 4) == 0) {
    std::ifstream in(path, std::ios::binary);
    in.seekg(4);
    const std::int64_t version = get_i64(in);
    if (version != 1) throw run_dir_error("unsupported CALU version in " + path.string());
    const std::int64_t N = get_i64(in);
    const std::int64_t n = get_i64(in);
    const std::int64_t k = get_i64(in);
    const double a = get_f64(in);
    const double b = get_f64(in);
    if (!in || N < 65 || n < 1 || k < 1)
      throw run_dir_error("corrupt CALU header in " + path.string());
    std::vector<double> psi(N);
    for (auto& v : psi) v = get_f64(in);
    if (!in) throw run_dir_error("truncated CALU payload in " + path.string());
    return StoredProfile{static_cast<int>(n),
                         RadialProfile(Grid::make(static_cast<int>(N), static_cast<int>(k)), a, b,
                                       std::move(psi))};
  }

  std::ifstream in(path);
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception&) {
    throw run_dir_error("not a CALU or JSON profile: " + path.string());
  }
  try {
    const int n = j.at("n").get<int>();
    const int k = j.at("k").get<int>();
    const int N = j.at("N").get<int>();
    const double a = j.at("a").get<double>();
    const double b = j.at("b").get<double>();
    auto psi = j.at("psi").get<std::vector<double>>();
    if (static_cast<int>(psi.size()) != N) throw run_dir_error("psi length mismatch in " + path.string());
    return StoredProfile{n, RadialProfile(Grid::make(N, k), a, b, std::move(psi))};
  } catch (const nlohmann::json::exception& e) {
    throw run_dir_error("corrupt profile JSON " + path.string() + ": " + e.what());
  }
}

}  // namespace calabi
