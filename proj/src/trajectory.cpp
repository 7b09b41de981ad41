#include "axs/trajectory.hpp"

#include <json.hpp>

namespace axs {

namespace {

nlohmann::ordered_json opt_json(const std::optional<double>& v) {
  if (!v) return nullptr;
  return *v;
}

}  // namespace

std::string to_json_line(const TrajectoryRecord& rec) {
  nlohmann::ordered_json j;
  j["n"] = rec.n;
  j["value"] = opt_json(rec.value);
  j["bound"] = opt_json(rec.bound);
  j["oracle"] = opt_json(rec.oracle);
  j["rel_err"] = opt_json(rec.rel_err);
  j["mem_words"] = rec.mem_words;
  j["elapsed_ns"] = rec.elapsed_ns ? nlohmann::ordered_json(*rec.elapsed_ns)
                                   : nlohmann::ordered_json(nullptr);
  return j.dump();
}

std::string to_json_lines(const std::vector<TrajectoryRecord>& recs) {
  std::string out;
  for (const auto& r : recs) {
    out += to_json_line(r);
    out += '\n';
  }
  return out;
}

}  // namespace axs
