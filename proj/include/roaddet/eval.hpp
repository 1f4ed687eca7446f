#pragma once

// Pixel-level scoring of road masks against ground truth: miss rate
// fn/(tp+fn) and false-alarm rate fp/(tn+fp), per image, per consecutive
// group of frames, and overall.

#include <cmath>
#include <cstdint>
#include <filesystem>
#include <iomanip>
#include <optional>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "roaddet/netpbm.hpp"
#include "roaddet/raster.hpp"

namespace roaddet {

struct ConfusionCounts {
  std::uint64_t tp = 0, fp = 0, tn = 0, fn = 0;

  std::uint64_t total() const noexcept { return tp + fp + tn + fn; }
  friend bool operator==(const ConfusionCounts&, const ConfusionCounts&) = default;
};

// A rate whose denominator is zero is nullopt (reported as UNDEFINED_DENOM).
using Rate = std::optional<double>;

struct Rates {
  Rate fnr;
  Rate fpr;
};

inline ConfusionCounts confusion(const BinaryMask& pred, const BinaryMask& gt) {
  require_same_shape(pred, gt, "confusion");
  ConfusionCounts c;
  for (std::size_t i = 0; i < pred.size(); ++i) {
    const bool p = pred[i] != 0, g = gt[i] != 0;
    if (p && g) ++c.tp;
    else if (!p && g) ++c.fn;
    else if (p && !g) ++c.fp;
    else ++c.tn;
  }
  return c;
}

inline Rates rates(const ConfusionCounts& c) {
  Rates r;
  if (c.tp + c.fn > 0) r.fnr = static_cast<double>(c.fn) / static_cast<double>(c.tp + c.fn);
  if (c.tn + c.fp > 0) r.fpr = static_cast<double>(c.fp) / static_cast<double>(c.tn + c.fp);
  return r;
}

struct ImageScore {
  std::string name;
  ConfusionCounts counts;
  Rates rates;
};

struct GroupScore {
  std::size_t first = 0;  // index into EvalReport::images
  std::size_t size = 0;
  Rate fnr;               // mean over members with a defined rate
  Rate fpr;
  std::size_t undefined_fnr = 0;
  std::size_t undefined_fpr = 0;
};

struct EvalReport {
  std::vector<ImageScore> images;
  std::vector<GroupScore> groups;
  GroupScore overall;
  std::size_t group_size = 3;
  std::string label;          // e.g. "filters=on"
  std::string config_digest;  // hex
};

namespace detail {

inline GroupScore average(const std::vector<ImageScore>& images, std::size_t first, std::size_t size) {
  GroupScore g{first, size, std::nullopt, std::nullopt, 0, 0};
  double fnr = 0.0, fpr = 0.0;
  std::size_t nfnr = 0, nfpr = 0;
  for (std::size_t i = first; i < first + size; ++i) {
    if (images[i].rates.fnr) { fnr += *images[i].rates.fnr; ++nfnr; } else { ++g.undefined_fnr; }
    if (images[i].rates.fpr) { fpr += *images[i].rates.fpr; ++nfpr; } else { ++g.undefined_fpr; }
  }
  if (nfnr) g.fnr = fnr / static_cast<double>(nfnr);
  if (nfpr) g.fpr = fpr / static_cast<double>(nfpr);
  return g;
}

}  // namespace detail

// Groups are consecutive runs of `group_size` images in input order; a
// trailing partial group is averaged over its actual size.
inline EvalReport make_report(std::vector<ImageScore> images, std::size_t group_size = 3) {
  if (group_size < 1) throw Error(ErrorKind::InvalidConfig, "group_size must be >= 1");
  EvalReport report;
  report.group_size = group_size;
  report.images = std::move(images);
  for (std::size_t first = 0; first < report.images.size(); first += group_size)
    report.groups.push_back(detail::average(
        report.images, first, std::min(group_size, report.images.size() - first)));
  report.overall = detail::average(report.images, 0, report.images.size());
  return report;
}

inline ImageScore score_image(std::string name, const BinaryMask& pred, const BinaryMask& gt) {
  ImageScore s{std::move(name), confusion(pred, gt), {}};
  s.rates = rates(s.counts);
  return s;
}

struct EvalPair {
  std::filesystem::path pred;
  std::filesystem::path gt;
};

inline EvalReport batch_eval(const std::vector<EvalPair>& pairs, std::size_t group_size = 3) {
  std::vector<ImageScore> scores;
  scores.reserve(pairs.size());
  for (const auto& pair : pairs) {
    auto load = [](const std::filesystem::path& p) {
      try {
        return netpbm::load_mask(netpbm::read_file(p));
      } catch (const Error& e) {
        throw with_context(e, p.string());
      }
    };
    const BinaryMask pred = load(pair.pred), gt = load(pair.gt);
    try {
      scores.push_back(score_image(pair.pred.stem().string(), pred, gt));
    } catch (const Error& e) {
      throw with_context(e, pair.pred.string());
    }
  }
  return make_report(std::move(scores), group_size);
}

struct RateDelta {
  Rate fnr;  // a - b, nullopt when either side is undefined
  Rate fpr;
};

struct ComparisonSummary {
  std::string label_a, label_b;
  std::vector<RateDelta> groups;
  RateDelta overall;
  GroupScore overall_a, overall_b;
  std::vector<GroupScore> groups_a, groups_b;
  std::string verdict;
};

namespace detail {

inline Rate diff(Rate a, Rate b) {
  if (!a || !b) return std::nullopt;
  return *a - *b;
}

inline std::string verdict_for(const char* metric, Rate delta, const std::string& a,
                               const std::string& b) {
  std::string out = std::string(metric) + ": ";
  if (!delta) return out + "undefined";
  if (*delta < 0) return out + a + " lower";
  if (*delta > 0) return out + b + " lower";
  return out + "tie";
}

inline std::string format_rate(Rate r) {
  if (!r) return "UNDEFINED_DENOM";
  std::ostringstream ss;
  ss << std::fixed << std::setprecision(4) << *r;
  return ss.str();
}

inline std::string format_delta(Rate r) {
  if (!r) return "n/a";
  std::ostringstream ss;
  ss << std::showpos << std::fixed << std::setprecision(4) << *r;
  return ss.str();
}

}  // namespace detail

inline ComparisonSummary compare_runs(const EvalReport& a, const EvalReport& b) {
  if (a.images.size() != b.images.size())
    throw Error(ErrorKind::MismatchedImageLists, "reports cover different numbers of images");
  for (std::size_t i = 0; i < a.images.size(); ++i)
    if (a.images[i].name != b.images[i].name)
      throw Error(ErrorKind::MismatchedImageLists,
                  "image " + std::to_string(i) + ": " + a.images[i].name + " vs " + b.images[i].name);
  if (a.group_size != b.group_size)
    throw Error(ErrorKind::MismatchedImageLists, "reports use different group sizes");

  ComparisonSummary s;
  s.label_a = a.label.empty() ? "A" : a.label;
  s.label_b = b.label.empty() ? "B" : b.label;
  if (s.label_a == s.label_b) {
    s.label_a += " (A)";
    s.label_b += " (B)";
  }
  for (std::size_t g = 0; g < a.groups.size(); ++g)
    s.groups.push_back({detail::diff(a.groups[g].fnr, b.groups[g].fnr),
                        detail::diff(a.groups[g].fpr, b.groups[g].fpr)});
  s.overall = {detail::diff(a.overall.fnr, b.overall.fnr), detail::diff(a.overall.fpr, b.overall.fpr)};
  s.overall_a = a.overall;
  s.overall_b = b.overall;
  s.groups_a = a.groups;
  s.groups_b = b.groups;
  s.verdict = detail::verdict_for("FNR", s.overall.fnr, s.label_a, s.label_b) + "; " +
              detail::verdict_for("FPR", s.overall.fpr, s.label_a, s.label_b);
  return s;
}

inline std::string render_text(const EvalReport& r) {
  std::ostringstream out;
  out << "# road detection report";
  if (!r.label.empty()) out << " [" << r.label << "]";
  if (!r.config_digest.empty()) out << " config=" << r.config_digest;
  out << "\n\n";
  out << std::left << std::setw(28) << "image" << std::right << std::setw(10) << "tp" << std::setw(10)
      << "fp" << std::setw(10) << "tn" << std::setw(10) << "fn" << std::setw(18) << "fnr"
      << std::setw(18) << "fpr" << "\n";
  for (const auto& im : r.images)
    out << std::left << std::setw(28) << im.name << std::right << std::setw(10) << im.counts.tp
        << std::setw(10) << im.counts.fp << std::setw(10) << im.counts.tn << std::setw(10)
        << im.counts.fn << std::setw(18) << detail::format_rate(im.rates.fnr) << std::setw(18)
        << detail::format_rate(im.rates.fpr) << "\n";
  out << "\ngroups of " << r.group_size << "\n";
  for (std::size_t g = 0; g < r.groups.size(); ++g) {
    const auto& gs = r.groups[g];
    out << "group " << std::setw(3) << g + 1 << " [" << gs.first << ".." << gs.first + gs.size - 1
        << "]  fnr " << detail::format_rate(gs.fnr) << "  fpr " << detail::format_rate(gs.fpr);
    if (gs.undefined_fnr || gs.undefined_fpr)
      out << "  (undefined: fnr " << gs.undefined_fnr << ", fpr " << gs.undefined_fpr << ")";
    out << "\n";
  }
  out << "overall  fnr " << detail::format_rate(r.overall.fnr) << "  fpr "
      << detail::format_rate(r.overall.fpr);
  if (r.overall.undefined_fnr || r.overall.undefined_fpr)
    out << "  (undefined: fnr " << r.overall.undefined_fnr << ", fpr " << r.overall.undefined_fpr << ")";
  out << "\n";
  return out.str();
}

// One row per image. Leading '#' lines carry the run metadata.
inline std::string render_csv(const EvalReport& r) {
  std::ostringstream out;
  out << "# label=" << r.label << "\n# config_digest=" << r.config_digest
      << "\n# group_size=" << r.group_size << "\n";
  out << "name,tp,fp,tn,fn,fnr,fpr\n";
  out << std::setprecision(17);
  for (const auto& im : r.images) {
    out << im.name << "," << im.counts.tp << "," << im.counts.fp << "," << im.counts.tn << ","
        << im.counts.fn << ",";
    if (im.rates.fnr) out << *im.rates.fnr; else out << "UNDEFINED_DENOM";
    out << ",";
    if (im.rates.fpr) out << *im.rates.fpr; else out << "UNDEFINED_DENOM";
    out << "\n";
  }
  return out.str();
}

// Rates are recomputed from the counts so the parsed report is exact.
inline EvalReport parse_csv(const std::string& text) {
  std::istringstream in(text);
  std::string line, label, digest;
  std::size_t group_size = 3;
  std::vector<ImageScore> images;
  bool header_seen = false;
  auto bad = [](const std::string& why) { return Error(ErrorKind::MalformedHeader, "report csv: " + why); };
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    if (line[0] == '#') {
      auto eq = line.find('=');
      if (eq == std::string::npos) continue;
      const std::string key = line.substr(2, eq - 2), value = line.substr(eq + 1);
      if (key == "label") label = value;
      else if (key == "config_digest") digest = value;
      else if (key == "group_size") group_size = std::stoul(value);
      continue;
    }
    if (!header_seen) {
      if (line != "name,tp,fp,tn,fn,fnr,fpr") throw bad("unexpected column header");
      header_seen = true;
      continue;
    }
    std::vector<std::string> cells;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) cells.push_back(cell);
    if (cells.size() != 7) throw bad("row has " + std::to_string(cells.size()) + " cells");
    ImageScore s;
    s.name = cells[0];
    try {
      s.counts = {std::stoull(cells[1]), std::stoull(cells[2]), std::stoull(cells[3]), std::stoull(cells[4])};
    } catch (const std::exception&) {
      throw bad("non-numeric count in row " + s.name);
    }
    s.rates = rates(s.counts);
    images.push_back(std::move(s));
  }
  if (!header_seen) throw bad("missing column header");
  EvalReport r = make_report(std::move(images), group_size);
  r.label = label;
  r.config_digest = digest;
  return r;
}

inline std::string render_comparison(const ComparisonSummary& s) {
  std::ostringstream out;
  out << "# comparison: A = " << s.label_a << ", B = " << s.label_b << "\n\n";
  out << std::left << std::setw(10) << "group" << std::right << std::setw(12) << "fnr A" << std::setw(12)
      << "fnr B" << std::setw(12) << "d fnr" << std::setw(12) << "fpr A" << std::setw(12) << "fpr B"
      << std::setw(12) << "d fpr" << "\n";
  auto row = [&](const std::string& name, const GroupScore& a, const GroupScore& b, const RateDelta& d) {
    out << std::left << std::setw(10) << name << std::right << std::setw(12) << detail::format_rate(a.fnr)
        << std::setw(12) << detail::format_rate(b.fnr) << std::setw(12) << detail::format_delta(d.fnr)
        << std::setw(12) << detail::format_rate(a.fpr) << std::setw(12) << detail::format_rate(b.fpr)
        << std::setw(12) << detail::format_delta(d.fpr) << "\n";
  };
  for (std::size_t g = 0; g < s.groups.size(); ++g)
    row(std::to_string(g + 1), s.groups_a[g], s.groups_b[g], s.groups[g]);
  row("overall", s.overall_a, s.overall_b, s.overall);
  out << "\nverdict: " << s.verdict << "\n";
  return out.str();
}

}  // namespace roaddet
