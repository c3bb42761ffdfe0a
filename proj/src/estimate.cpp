#include "ngd/estimate.hpp"
#include "ngd/scale.hpp"

#include <cmath>
#include <iomanip>
#include <sstream>

namespace ngd {

std::vector<double> dyadic_grid(int first, int last) {
  std::vector<double> grid;
  for (int k = first; k <= last; ++k) grid.push_back(std::ldexp(1.0, -k));
  return grid;
}

void fit_order(LimitEstimate& est, double floor, std::size_t window) {
  std::vector<std::pair<double, double>> pts;
  for (std::size_t i = 0; i < est.eps.size() && i < est.residual.size(); ++i)
    if (est.residual[i] > floor && est.eps[i] > 0)
      pts.emplace_back(std::log(est.eps[i]), std::log(est.residual[i]));
  est.exact = pts.empty();
  est.order.reset();
  if (pts.size() > window) pts.erase(pts.begin(), pts.end() - static_cast<std::ptrdiff_t>(window));
  if (pts.size() >= 2) {
    double mx = 0, my = 0;
    for (auto [x, y] : pts) mx += x, my += y;
    mx /= static_cast<double>(pts.size());
    my /= static_cast<double>(pts.size());
    double sxy = 0, sxx = 0;
    for (auto [x, y] : pts) sxy += (x - mx) * (y - my), sxx += (x - mx) * (x - mx);
    if (sxx > 0) est.order = sxy / sxx;
  }
  est.nonmonotone = false;
  // Grids run from large to small eps; residuals may not grow beyond noise.
  for (std::size_t i = 1; i < est.residual.size(); ++i) {
    const double prev = est.residual[i - 1], cur = est.residual[i];
    if (cur > prev * (1 + 1e-6) + floor) {
      est.nonmonotone = true;
      std::ostringstream t;
      t << "residual grows from " << prev << " at eps=" << est.eps[i - 1] << " to " << cur
        << " at eps=" << est.eps[i];
      est.trace.push_back(t.str());
    }
  }
}

void decide(LimitEstimate& est, double tol) {
  est.tol = tol;
  est.pass = est.partial.empty() && !est.residual.empty() && est.residual.back() < tol && !est.nonmonotone;
}

nlohmann::json LimitEstimate::to_json() const {
  nlohmann::json j;
  j["axiom"] = axiom;
  j["eps"] = eps;
  j["residual"] = residual;
  j["order"] = order ? nlohmann::json(*order) : nlohmann::json(nullptr);
  j["exact"] = exact;
  j["pass"] = pass;
  j["tol"] = tol;
  j["samples"] = samples;
  if (!partial.empty()) j["partial"] = partial;
  if (!trace.empty()) j["trace"] = trace;
  return j;
}

std::string LimitEstimate::summary() const {
  std::ostringstream out;
  out << (pass ? "PASS " : "FAIL ") << axiom << " (" << samples << " samples)";
  if (exact)
    out << " exact";
  else if (order)
    out << " order " << std::fixed << std::setprecision(3) << *order;
  out << "\n";
  out << std::setw(14) << "eps" << std::setw(16) << "residual" << "\n";
  out << std::scientific << std::setprecision(6);
  for (std::size_t i = 0; i < eps.size() && i < residual.size(); ++i)
    out << std::setw(14) << eps[i] << std::setw(16) << residual[i] << "\n";
  if (!partial.empty()) out << "  partial: " << partial << "\n";
  for (const auto& t : trace) out << "  " << t << "\n";
  return out.str();
}

}  // namespace ngd
