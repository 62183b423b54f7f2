#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "prethermal/lattice.hpp"

namespace prethermal {

enum class Sampling { stroboscopic, uniform, per_substep };

const char* to_string(Sampling mode);
Sampling sampling_from_string(const std::string& name);

/// Sampled times (hbar/E_R) with named real channels of equal length.
class TimeSeries {
 public:
  std::vector<double> times;
  Sampling mode = Sampling::uniform;
  std::optional<DriveParams> drive;
  std::map<std::string, std::string> metadata;

  /// Appends a channel (all values must be supplied before use).
  std::vector<double>& add_channel(const std::string& name);
  const std::vector<double>& channel(const std::string& name) const;
  std::vector<double>& channel(const std::string& name);
  bool has_channel(const std::string& name) const;
  const std::vector<std::string>& channel_names() const noexcept { return names_; }

  std::size_t size() const noexcept { return times.size(); }
  /// Throws std::logic_error when a channel length differs from times.
  void validate() const;

 private:
  std::vector<std::string> names_;
  std::map<std::string, std::vector<double>> channels_;
};

}  // namespace prethermal
