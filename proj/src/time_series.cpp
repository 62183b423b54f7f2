#include "prethermal/time_series.hpp"

#include <stdexcept>

namespace prethermal {

const char* to_string(Sampling mode) {
  switch (mode) {
    case Sampling::stroboscopic:
      return "stroboscopic";
    case Sampling::uniform:
      return "uniform";
    case Sampling::per_substep:
      return "per-substep";
  }
  return "?";
}

Sampling sampling_from_string(const std::string& name) {
  if (name == "stroboscopic") return Sampling::stroboscopic;
  if (name == "uniform") return Sampling::uniform;
  if (name == "per-substep" || name == "per_substep") return Sampling::per_substep;
  throw std::invalid_argument("unknown sampling mode '" + name + "'");
}

std::vector<double>& TimeSeries::add_channel(const std::string& name) {
  auto it = channels_.find(name);
  if (it != channels_.end()) return it->second;
  names_.push_back(name);
  return channels_[name];
}

const std::vector<double>& TimeSeries::channel(const std::string& name) const {
  auto it = channels_.find(name);
  if (it == channels_.end()) throw std::out_of_range("no channel named " + name);
  return it->second;
}

std::vector<double>& TimeSeries::channel(const std::string& name) {
  auto it = channels_.find(name);
  if (it == channels_.end()) throw std::out_of_range("no channel named " + name);
  return it->second;
}

bool TimeSeries::has_channel(const std::string& name) const { return channels_.count(name) > 0; }

void TimeSeries::validate() const {
  for (const auto& name : names_)
    if (channels_.at(name).size() != times.size())
      throw std::logic_error("channel " + name + " length differs from times");
  for (std::size_t i = 1; i < times.size(); ++i)
    if (!(times[i] > times[i - 1])) throw std::logic_error("times must be strictly increasing");
}

}  // namespace prethermal
