#include "twobody/moments.hpp"

#include "json.hpp"

namespace twobody {

std::string moments_to_json(const PseudoMoments& m) {
  nlohmann::json j;
  j["schema_version"] = 1;
  j["mu"] = m.mu;
  auto entries = nlohmann::json::array();
  const int n = static_cast<int>(m.mu.size());
  for (int i = 0; i < n; ++i)
    for (int k = i + 1; k < n; ++k) entries.push_back({i, k, m.nu(i, k)});
  j["nu_entries"] = std::move(entries);
  return j.dump(2) + "\n";
}

}  // namespace twobody
