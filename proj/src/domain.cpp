#include "seal/domain.hpp"

#include <cmath>
#include <numeric>

#include "seal/errors.hpp"

namespace seal {

void create_product(Firm& firm) {
  if (firm.product) throw InputError("firm already has its product");
  firm.product = Product{firm.product_index, 1.0, 0.0};
  ++firm.product_index;
}

double production_quantity(std::span<const double> qualifications, double alpha) {
  double q = 0.0;
  for (double qual : qualifications) q += std::pow(qual, alpha);
  return q;
}

double produce(Firm& firm, std::span<const double> qualifications, double alpha) {
  if (firm.employees.empty() || !(firm.total_balance > 0.0) || !firm.product) return 0.0;
  const double q = production_quantity(qualifications, alpha);
  firm.product->quantity += q;
  firm.amount_produced += q;
  return q;
}

void update_prices(Firm& firm, double threshold, double markup) {
  if (!(markup > 0.0 && markup < 1.0)) throw InputError("MARKUP must lie in (0, 1)");
  if (!firm.product) return;
  Product& p = *firm.product;
  if (firm.employees.empty() || p.quantity == 0.0) return;
  if (p.quantity < threshold) {
    p.price *= 1.0 + markup;
  } else {
    p.price *= 1.0 - markup;
  }
}

double wage_base(const Firm& firm) {
  if (firm.profit > 0.0 && firm.total_balance > 0.0) return 1.0 + firm.profit / firm.total_balance;
  return 1.0;
}

Payroll pay_salaries(Firm& firm, std::span<const double> qualifications, double alpha) {
  Payroll payroll;
  const double base = wage_base(firm);
  payroll.salaries.reserve(qualifications.size());
  for (double q : qualifications) {
    const double s = base * kDaysPerMonth * std::pow(q, alpha);
    payroll.salaries.push_back(s);
    payroll.bill += s;
  }
  const double cash = std::max(firm.total_balance, 0.0);
  if (payroll.bill > cash) {
    const double scale = payroll.bill > 0.0 ? cash / payroll.bill : 0.0;
    for (double& s : payroll.salaries) s *= scale;
  }
  payroll.paid = std::accumulate(payroll.salaries.begin(), payroll.salaries.end(), 0.0);
  firm.total_balance -= payroll.paid;
  if (payroll.bill > cash && firm.total_balance < 0.0) firm.total_balance = 0.0;
  return payroll;
}

void pool_and_split(Family& family, std::span<const std::reference_wrapper<Citizen>> members) {
  if (members.empty()) return;
  double pool = family.balance;
  for (const Citizen& c : members) pool += c.money;
  const double share = pool / static_cast<double>(members.size());
  for (Citizen& c : members) c.money = share;
  family.balance = 0.0;
}

void reprice_house(Household& house, double region_index) {
  house.price = house.size * static_cast<double>(house.quality) * region_index;
}

double fiscal_spend(FiscalCluster& cluster, double treasure_into_services, std::size_t n_prev,
                    std::size_t n_now) {
  if (n_now == 0) return 0.0;
  const double now = static_cast<double>(n_now);
  cluster.index = cluster.index * static_cast<double>(n_prev) / now +
                  cluster.treasure * treasure_into_services / now;
  const double spent = cluster.treasure;
  cluster.treasure = 0.0;
  return spent;
}

void quarterly_rebase(Firm& firm) {
  firm.profit = firm.total_balance - firm.last_qtr_balance;
  firm.last_qtr_balance = firm.total_balance;
}

}  // namespace seal
