#include <charconv>
#include <fstream>
#include <json.hpp>

#include "json_fields.hpp"
#include "topicstab/error.hpp"
#include "topicstab/lda.hpp"

namespace topicstab {

namespace fs = std::filesystem;
using nlohmann::json;
using detail::require_field;

void save_model(const TopicModel& model, const fs::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write '" + path.string() + "'");
  const auto& c = model.config();
  json header = {
      {"format", "topicstab-model"},
      {"version", kModelFormatVersion},
      {"K", c.num_topics},
      {"V", model.vocabulary().size()},
      {"alpha", c.alpha},
      {"beta", c.beta},
      {"iterations", c.iterations},
      {"seed", c.seed},
      {"corpus_fingerprint", model.corpus_fingerprint()},
      {"vocabulary", model.vocabulary().words()},
      {"final_log_likelihood", model.final_log_likelihood()},
  };
  out << header.dump() << '\n';

  // Shortest representation that round-trips exactly.
  char buf[64];
  for (std::size_t k = 0; k < model.num_topics(); ++k) {
    bool first = true;
    for (double p : model.phi().row(k)) {
      auto [end, ec] = std::to_chars(buf, buf + sizeof buf, p);
      if (!first) out << ' ';
      out.write(buf, end - buf);
      first = false;
    }
    out << '\n';
  }
  if (!out) throw IoError("write failed for '" + path.string() + "'");
}

TopicModel load_model(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open '" + path.string() + "'");
  const std::string context = "model file '" + path.string() + "'";
  std::string line;
  if (!std::getline(in, line)) throw FormatError(context + ": empty file");
  const json header = detail::parse_json_line(line, context + " header");

  const auto version = require_field<int>(header, "version", context);
  if (version != kModelFormatVersion) {
    throw FormatError(context + ": field 'version' is " + std::to_string(version) + ", expected " +
                      std::to_string(kModelFormatVersion));
  }
  ModelConfig config;
  config.num_topics = require_field<int>(header, "K", context);
  const auto v = require_field<std::size_t>(header, "V", context);
  config.alpha = require_field<double>(header, "alpha", context);
  config.beta = require_field<double>(header, "beta", context);
  config.iterations = require_field<int>(header, "iterations", context);
  config.seed = require_field<std::uint64_t>(header, "seed", context);
  const auto fingerprint = require_field<std::string>(header, "corpus_fingerprint", context);
  auto words = require_field<std::vector<std::string>>(header, "vocabulary", context);
  const auto ll = require_field<double>(header, "final_log_likelihood", context);
  if (config.num_topics < 1) throw FormatError(context + ": field 'K' must be positive");
  if (words.size() != v) throw FormatError(context + ": field 'vocabulary' has " + std::to_string(words.size()) + " entries, 'V' says " + std::to_string(v));

  const std::size_t K = static_cast<std::size_t>(config.num_topics);
  Matrix phi(K, v);
  for (std::size_t k = 0; k < K; ++k) {
    if (!std::getline(in, line)) {
      throw FormatError(context + ": truncated, expected " + std::to_string(K) + " rows, found " + std::to_string(k));
    }
    const char* p = line.data();
    const char* end = line.data() + line.size();
    for (std::size_t w = 0; w < v; ++w) {
      while (p < end && *p == ' ') ++p;
      double value = 0.0;
      auto [next, ec] = std::from_chars(p, end, value);
      if (ec != std::errc()) {
        throw FormatError(context + ": row " + std::to_string(k) + " truncated or malformed at column " + std::to_string(w));
      }
      phi(k, w) = value;
      p = next;
    }
    while (p < end && (*p == ' ' || *p == '\r')) ++p;
    if (p != end) throw FormatError(context + ": row " + std::to_string(k) + " has more than V values");
  }

  try {
    return TopicModel(config, Vocabulary(std::move(words)), std::move(phi), fingerprint, ll);
  } catch (const InvalidArgument& e) {
    throw FormatError(context + ": " + e.what());
  }
}

}  // namespace topicstab
