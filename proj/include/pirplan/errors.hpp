#ifndef PIRPLAN_ERRORS_HPP
#define PIRPLAN_ERRORS_HPP

#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace pirplan {

/// Thrown when an enumeration-based oracle would exceed its combination budget.
class SizeLimitError : public std::runtime_error {
 public:
  explicit SizeLimitError(const std::string& what) : std::runtime_error(what) {}
};

/// Bargaining failed: the feasible set is empty. Carries both threat points (years).
class NoAgreementError : public std::runtime_error {
 public:
  NoAgreementError(double threat_sensor_years, double threat_switch_years)
      : std::runtime_error("no bargaining agreement: feasible set is empty"),
        threat_sensor_years(threat_sensor_years),
        threat_switch_years(threat_switch_years) {}

  double threat_sensor_years;
  double threat_switch_years;
};

/// Relay placement cannot connect every sensor even with all candidates enabled.
/// worst_links lists, per unreachable sensor, the best achievable bottleneck outage.
class InfeasibleError : public std::runtime_error {
 public:
  struct WorstLink {
    int sensor_index;
    int from_node;
    int to_node;
    double outage;  // bottleneck outage on the sensor's best path, 1.0 if none exists
  };

  InfeasibleError(const std::string& what, std::vector<WorstLink> worst)
      : std::runtime_error(what), worst_links(std::move(worst)) {}

  std::vector<WorstLink> worst_links;
};

class IoError : public std::runtime_error {
 public:
  explicit IoError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace pirplan

#endif  // PIRPLAN_ERRORS_HPP
