#include "rfront/dynamics.hpp"

#include <algorithm>
#include <charconv>
#include <stdexcept>
#include <unordered_map>

#include <json.hpp>

namespace rfront {

FrontDynamics yearly_counts(const Corpus& corpus, const Partition& p) {
  std::unordered_map<std::string_view, const RawRecord*> by_uid;
  by_uid.reserve(corpus.records.size());
  for (const auto& r : corpus.records) by_uid.emplace(r.uid, &r);

  FrontDynamics d;
  for (std::size_t i = 0; i < p.uids.size(); ++i) {
    auto it = by_uid.find(p.uids[i]);
    if (it == by_uid.end()) throw DataError("partition node '" + p.uids[i] + "' is not in the corpus");
    const int f = p.assignment[i];
    if (f == kNoise) {
      ++d.noise_count;
    } else if (!it->second->year) {
      ++d.missing_year_count;
    } else {
      ++d.counts[f][*it->second->year];
    }
  }
  for (const auto& [f, per_year] : d.counts) d.peaks[f] = peak_year(per_year);
  return d;
}

int peak_year(const std::map<int, std::size_t>& per_year) {
  if (per_year.empty()) throw std::invalid_argument("no years to take a peak over");
  auto best = per_year.begin();
  for (auto it = per_year.begin(); it != per_year.end(); ++it)
    if (it->second > best->second) best = it;  // ascending years: first maximum is earliest
  return best->first;
}

std::map<int, PeakInfo> peak_summary(const FrontDynamics& d, const std::vector<YearPeriod>& periods) {
  for (std::size_t i = 0; i < periods.size(); ++i) {
    if (periods[i].start > periods[i].end) throw std::invalid_argument("period starts after it ends");
    if (i > 0 && periods[i].start <= periods[i - 1].end)
      throw std::invalid_argument("periods overlap or are not ascending");
  }
  std::map<int, PeakInfo> out;
  for (const auto& [f, per_year] : d.counts) {
    PeakInfo info{peak_year(per_year), std::nullopt};
    for (std::size_t i = 0; i < periods.size(); ++i)
      if (info.year >= periods[i].start && info.year <= periods[i].end) info.period = i;
    out.emplace(f, info);
  }
  return out;
}

std::vector<YearPeriod> parse_periods(const std::string& text) {
  std::vector<YearPeriod> out;
  std::size_t pos = 0;
  auto number = [&](std::string_view s) {
    int v = 0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || ptr != s.data() + s.size())
      throw std::invalid_argument("bad period '" + text + "'");
    return v;
  };
  while (pos < text.size()) {
    std::size_t end = text.find(',', pos);
    if (end == std::string::npos) end = text.size();
    std::string_view item(text.data() + pos, end - pos);
    while (!item.empty() && item.front() == ' ') item.remove_prefix(1);
    while (!item.empty() && item.back() == ' ') item.remove_suffix(1);
    if (!item.empty()) {
      auto dash = item.find('-');
      if (dash == std::string_view::npos) {
        int y = number(item);
        out.push_back({y, y});
      } else {
        out.push_back({number(item.substr(0, dash)), number(item.substr(dash + 1))});
      }
    }
    pos = end + 1;
  }
  return out;
}

void write_dynamics_csv(std::ostream& out, const FrontDynamics& d, const Partition& p) {
  out << "year";
  for (const auto& f : p.fronts) out << ",front_" << f.label;
  out << '\n';
  int first = 0, last = -1;
  for (const auto& [f, per_year] : d.counts) {
    if (per_year.empty()) continue;
    if (last < first) {
      first = per_year.begin()->first;
      last = per_year.rbegin()->first;
    }
    first = std::min(first, per_year.begin()->first);
    last = std::max(last, per_year.rbegin()->first);
  }
  for (int y = first; y <= last; ++y) {
    out << y;
    for (const auto& f : p.fronts) {
      std::size_t c = 0;
      if (auto it = d.counts.find(f.id); it != d.counts.end())
        if (auto jt = it->second.find(y); jt != it->second.end()) c = jt->second;
      out << ',' << c;
    }
    out << '\n';
  }
}

void write_peaks_json(std::ostream& out, const FrontDynamics& d, const Partition& p,
                      const std::vector<YearPeriod>& periods) {
  using nlohmann::ordered_json;
  const auto summary = peak_summary(d, periods);
  ordered_json doc;
  doc["periods"] = ordered_json::array();
  for (const auto& per : periods) doc["periods"].push_back({per.start, per.end});
  doc["fronts"] = ordered_json::array();
  for (const auto& [f, info] : summary) {
    const FrontInfo* fi = p.front(f);
    std::size_t total = 0;
    for (const auto& [y, c] : d.counts.at(f)) total += c;
    doc["fronts"].push_back({{"id", f},
                             {"label", fi ? fi->label : std::to_string(f)},
                             {"papers", total},
                             {"peak_year", info.year},
                             {"peak_count", d.counts.at(f).at(info.year)},
                             {"period", info.period ? ordered_json(*info.period) : ordered_json(nullptr)}});
  }
  doc["missing_year_count"] = d.missing_year_count;
  doc["noise_count"] = d.noise_count;
  out << doc.dump(2) << '\n';
}

}  // namespace rfront
