#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>

#include "plab/models.hpp"
#include "plab/stepper.hpp"

namespace plab {

namespace {

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  std::istringstream in(s);
  while (std::getline(in, cur, sep)) out.push_back(cur);
  return out;
}

}  // namespace

LedgerQuantity LedgerQuantity::parse(const std::string& token) {
  const auto parts = split(token, ':');
  if (parts.empty()) throw PreconditionError("empty ledger quantity");
  LedgerQuantity q;
  const std::string& head = parts[0];
  auto need = [&](std::size_t count) {
    if (parts.size() != count)
      throw PreconditionError("ledger quantity '" + token + "' has the wrong number of fields");
  };
  if (head == "dsup") {
    need(2);
    q.kind = Kind::dsup;
    q.k = std::stoi(parts[1]);
    if (q.k < 0) throw PreconditionError("derivative order must be nonnegative");
  } else if (head == "holder") {
    need(3);
    q.kind = Kind::holder;
    q.k = std::stoi(parts[1]);
    q.kappa = std::stod(parts[2]);
    if (q.k < 0 || !(q.kappa > 0.0 && q.kappa <= 1.0))
      throw PreconditionError("holder quantity needs k >= 0 and kappa in (0, 1]");
  } else if (head == "dev") {
    need(1);
    q.kind = Kind::dev;
  } else if (head == "sq_integral") {
    need(1);
    q.kind = Kind::sq_integral;
  } else if (head == "area") {
    need(1);
    q.kind = Kind::area;
  } else if (head == "circle_dist") {
    need(1);
    q.kind = Kind::circle_dist;
  } else {
    throw PreconditionError("unknown ledger quantity '" + token + "'");
  }
  return q;
}

std::string LedgerQuantity::column() const {
  switch (kind) {
    case Kind::dsup: return "dsup" + std::to_string(k);
    case Kind::holder: {
      char buf[64];
      std::snprintf(buf, sizeof buf, "holder%d_%g", k, kappa);
      return buf;
    }
    case Kind::dev: return "dev";
    case Kind::sq_integral: return "sq_integral";
    case Kind::area: return "area";
    case Kind::circle_dist: return "circle_dist";
  }
  return "?";
}

double LedgerQuantity::measure(const PeriodicField& u) const {
  switch (kind) {
    case Kind::dsup: {
      const PeriodicField d = derivative(u, k);
      double m = 0.0;
      for (double v : d.samples()) m = std::max(m, std::abs(v));
      return m;
    }
    case Kind::holder: return holder_seminorm(u, k, kappa).value;
    case Kind::dev: {
      double m = 0.0;
      for (int c = 0; c < u.components(); ++c) {
        auto s = u.component(c);
        double mean = 0.0;
        for (double v : s) mean += v;
        mean /= static_cast<double>(s.size());
        for (double v : s) m = std::max(m, std::abs(v - mean));
      }
      return m;
    }
    case Kind::sq_integral: {
      double sum = 0.0;
      for (double v : u.component(0)) sum += v * v;
      return sum * u.spacing();
    }
    case Kind::area: return enclosed_area(u);
    case Kind::circle_dist: return circle_distance(u);
  }
  return 0.0;
}

LedgerRow make_ledger_row(double t, const PeriodicField& u,
                          const std::vector<LedgerQuantity>& quantities, bool with_theta) {
  LedgerRow row;
  row.t = t;
  row.norms = norms(u);
  for (const auto& q : quantities) row.extra.push_back(q.measure(u));
  if (with_theta) row.theta = theta_monitor(u);
  return row;
}

std::vector<std::string> Trajectory::columns() const {
  std::vector<std::string> c{"t", "l2", "linf", "mean"};
  for (const auto& q : quantities) c.push_back(q.column());
  if (has_theta) c.push_back("theta");
  return c;
}

std::vector<double> Trajectory::column(const std::string& name) const {
  std::vector<double> out;
  out.reserve(ledger.size());
  std::ptrdiff_t extra = -1;
  for (std::size_t q = 0; q < quantities.size(); ++q)
    if (quantities[q].column() == name) extra = static_cast<std::ptrdiff_t>(q);
  const bool known = name == "t" || name == "l2" || name == "linf" || name == "mean" ||
                     (name == "theta" && has_theta) || extra >= 0;
  if (!known) throw PreconditionError("ledger has no column '" + name + "'");
  for (const auto& row : ledger) {
    if (name == "t") out.push_back(row.t);
    else if (name == "l2") out.push_back(row.norms.l2);
    else if (name == "linf") out.push_back(row.norms.linf);
    else if (name == "mean") out.push_back(row.norms.mean);
    else if (name == "theta") out.push_back(row.theta);
    else out.push_back(row.extra[static_cast<std::size_t>(extra)]);
  }
  return out;
}

void Trajectory::record(double t, const PeriodicField& u, bool keep_snapshot) {
  if (!times.empty() && !(t > times.back()))
    throw PreconditionError("trajectory times must increase strictly");
  times.push_back(t);
  ledger.push_back(make_ledger_row(t, u, quantities, has_theta));
  if (keep_snapshot) snapshots.push_back(u);
}

}  // namespace plab
