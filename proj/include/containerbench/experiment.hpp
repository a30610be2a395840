#pragma once

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <exception>
#include <functional>
#include <mutex>
#include <sstream>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include "containerbench/errors.hpp"
#include "containerbench/rng.hpp"
#include "containerbench/testers.hpp"

namespace cbench {

struct WilsonInterval {
  double low = 0.0;
  double high = 1.0;
};

/// Wilson score interval at 95% confidence.
inline WilsonInterval wilson_interval(std::size_t successes, std::size_t trials) {
  if (trials == 0) return {0.0, 1.0};
  constexpr double z = 1.959963984540054;
  const double n = static_cast<double>(trials);
  const double p = static_cast<double>(successes) / n;
  const double z2 = z * z;
  const double centre = (p + z2 / (2 * n)) / (1 + z2 / n);
  const double half = z / (1 + z2 / n) * std::sqrt(p * (1 - p) / n + z2 / (4 * n * n));
  return {std::max(0.0, centre - half), std::min(1.0, centre + half)};
}

struct TrialRow {
  std::size_t trial = 0;
  std::uint64_t seed = 0;
  bool accept = false;
  std::size_t queries = 0;
};

struct AcceptanceEstimate {
  std::size_t trials = 0;
  std::size_t accepts = 0;
  double rate = 0.0;
  WilsonInterval interval;
  std::uint64_t master_seed = 0;
  std::vector<TrialRow> rows;
};

/// A tester bound to its instance and parameters; maps a trial seed to a report.
using TesterRun = std::function<TesterReport(std::uint64_t seed)>;

class TrialFailure : public std::runtime_error {
 public:
  TrialFailure(std::size_t trial, const std::string& what)
      : std::runtime_error("trial " + std::to_string(trial) + ": " + what), trial_(trial) {}
  std::size_t trial() const { return trial_; }

 private:
  std::size_t trial_;
};

/// Runs `trials` independent tester calls with seeds derive_seed(master, i).
/// Rows land in trial order regardless of scheduling, so results do not
/// depend on `workers`. The first failing trial (lowest index) is rethrown.
inline AcceptanceEstimate estimate_acceptance(const TesterRun& run, std::size_t trials, std::uint64_t master_seed,
                                              std::size_t workers = 1) {
  if (trials < 1) throw PreconditionError("trials must be at least 1");
  workers = std::clamp<std::size_t>(workers, 1, trials);
  AcceptanceEstimate est;
  est.trials = trials;
  est.master_seed = master_seed;
  est.rows.resize(trials);
  std::vector<std::string> errors(trials);
  std::vector<char> failed(trials, 0);
  std::atomic<std::size_t> next{0};

  auto work = [&] {
    for (std::size_t i = next++; i < trials; i = next++) {
      const auto seed = derive_seed(master_seed, i);
      try {
        auto rep = run(seed);
        est.rows[i] = {i, seed, rep.accept, rep.query_count};
      } catch (const std::exception& e) {
        failed[i] = 1;
        errors[i] = e.what();
      }
    }
  };
  if (workers == 1) {
    work();
  } else {
    std::vector<std::thread> pool;
    for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(work);
    for (auto& t : pool) t.join();
  }
  for (std::size_t i = 0; i < trials; ++i)
    if (failed[i]) throw TrialFailure(i, errors[i]);

  for (const auto& r : est.rows) est.accepts += r.accept;
  est.rate = static_cast<double>(est.accepts) / static_cast<double>(trials);
  est.interval = wilson_interval(est.accepts, trials);
  return est;
}

inline std::string trials_csv(const AcceptanceEstimate& est) {
  std::ostringstream os;
  os << "trial,seed,verdict,queries\n";
  for (const auto& r : est.rows)
    os << r.trial << ',' << r.seed << ',' << (r.accept ? "accept" : "reject") << ',' << r.queries << '\n';
  return os.str();
}

}  // namespace cbench
