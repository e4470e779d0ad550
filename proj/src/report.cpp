#include "threshgate/report.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <openssl/evp.h>
#include <unistd.h>

#include "threshgate/error.hpp"

namespace threshgate {

nlohmann::json json_number(double value) {
  if (!std::isfinite(value)) return nullptr;
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.9g", value);
  return std::strtod(buf, nullptr);
}

nlohmann::json to_json(const GaussianParams& p) {
  return {{"a", json_number(p.a)}, {"mu", json_number(p.mu)}, {"sigma", json_number(p.sigma)}};
}

nlohmann::json to_json(const FitReport& report) {
  nlohmann::json j;
  if (const auto* single = std::get_if<GaussianParams>(&report.params)) {
    j["params"] = to_json(*single);
  } else {
    const auto& dual = std::get<DualGaussianParams>(report.params);
    j["params"] = nlohmann::json::array({to_json(dual.g1), to_json(dual.g2)});
  }
  j["converged"] = report.converged;
  j["valid"] = report.valid;
  j["delta"] = json_number(report.delta);
  j["epsilon"] = json_number(report.epsilon);
  j["rss"] = json_number(report.rss);
  j["iterations"] = report.iterations;
  j["note"] = report.note;
  return j;
}

nlohmann::json to_json(const MetricsReport& m) {
  return {
      {"threshold", json_number(m.threshold)},
      {"n_results", m.n_results},
      {"f1", json_number(m.f1)},
      {"precision", json_number(m.precision)},
      {"recall", json_number(m.recall)},
      {"accuracy", json_number(m.accuracy)},
      {"specificity", json_number(m.specificity)},
      {"zero_denominator", m.zero_denominator},
      {"confusion",
       {{"tp", m.counts.tp}, {"fp", m.counts.fp}, {"tn", m.counts.tn}, {"fn", m.counts.fn},
        {"unlabeled", m.counts.unlabeled}}},
  };
}

nlohmann::json to_json(const ThresholdDecision& d) {
  nlohmann::json j;
  j["model"] = std::string(to_string(d.model.variant));
  j["tau"] = d.tau ? json_number(*d.tau) : nlohmann::json(nullptr);
  j["n_selected"] = d.n_selected;
  j["dual_without_intersection"] = d.dual_without_intersection;
  if (!d.manual_reason.empty()) j["manual_reason"] = d.manual_reason;
  nlohmann::json fits = nlohmann::json::object();
  if (d.model.dual_report) fits["dual"] = to_json(*d.model.dual_report);
  if (d.model.single_report) fits["single"] = to_json(*d.model.single_report);
  j["fits"] = fits;
  j["sample"] = {{"min", json_number(d.moments.min)},
                 {"max", json_number(d.moments.max)},
                 {"mean", json_number(d.moments.mean)},
                 {"std", json_number(d.moments.stddev)}};
  if (d.histogram) {
    j["histogram"] = {{"bins", d.histogram->bins()},
                      {"bin_width", json_number(d.histogram->bin_width)},
                      {"n_samples", d.histogram->n_samples}};
  }
  return j;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(Errc::Io, "cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

nlohmann::json file_digest(const std::string& path) {
  const std::string content = read_file(path);
  unsigned char md[EVP_MAX_MD_SIZE];
  unsigned int md_len = 0;
  if (EVP_Digest(content.data(), content.size(), md, &md_len, EVP_sha256(), nullptr) != 1) {
    throw Error(Errc::Io, "SHA-256 failed for " + path);
  }
  std::string hex;
  hex.reserve(md_len * 2);
  static constexpr char kHex[] = "0123456789abcdef";
  for (unsigned int i = 0; i < md_len; ++i) {
    hex += kHex[md[i] >> 4];
    hex += kHex[md[i] & 0xF];
  }
  return {{"bytes", content.size()}, {"sha256", hex}};
}

std::string report_timestamp() {
  if (const char* fixed = std::getenv(kFixedTimestampEnv)) return fixed;
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm utc{};
  gmtime_r(&now, &utc);
  char buf[32];
  std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &utc);
  return buf;
}

void write_file_atomically(const std::string& path, std::string_view content) {
  const std::string tmp = path + ".tmp." + std::to_string(::getpid());
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(Errc::Io, "cannot open " + tmp);
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    out.flush();
    if (!out) throw Error(Errc::Io, "failed writing " + tmp);
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) {
    std::filesystem::remove(tmp);
    throw Error(Errc::Io, "cannot rename " + tmp + " to " + path + ": " + ec.message());
  }
}

}  // namespace threshgate
