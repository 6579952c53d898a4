#include <map>
#include <string>

#include "einsteinprobe/manifold.hpp"

namespace ep {

namespace {

// Bundled chart definitions. The same documents ship under catalog/ for use
// as file-based specs; keep the two in sync (a test compares them).
const std::map<std::string, std::string>& catalog_texts() {
  static const std::map<std::string, std::string> texts = {
      {"euclidean2", R"json({
  "name": "euclidean2",
  "dim": 2,
  "coords": ["x1", "x2"],
  "domain": [[-5, 5], [-5, 5]],
  "metric": [[1, 0], [null, 1]]
}
)json"},
      {"flat_torus3", R"json({
  "name": "flat_torus3",
  "dim": 3,
  "coords": ["u", "v", "w"],
  "params": {"r1": 1.0, "r2": 1.0, "r3": 2.0},
  "domain": [[0, 6.2832], [0, 6.2832], [0, 6.2832]],
  "metric": [["r1^2", 0, 0], [null, "r2^2", 0], [null, null, "r3^2"]]
}
)json"},
      {"sphere2", R"json({
  "name": "sphere2",
  "dim": 2,
  "coords": ["theta", "phi"],
  "params": {"R": 1.0},
  "domain": [[0.3, 2.8], [0.1, 6.1]],
  "metric": [["R^2", 0], [null, "R^2*sin(theta)^2"]]
}
)json"},
      {"hyperbolic2", R"json({
  "name": "hyperbolic2",
  "dim": 2,
  "coords": ["x", "y"],
  "domain": [[-3, 3], [0.5, 4]],
  "metric": [["1/y^2", 0], [null, "1/y^2"]]
}
)json"},
      {"s2_x_s1", R"json({
  "name": "s2_x_s1",
  "dim": 3,
  "coords": ["theta", "phi", "psi"],
  "params": {"L": 1.0},
  "domain": [[0.3, 2.8], [0.1, 6.1], [0, 6.2832]],
  "metric": [[1, 0, 0], [null, "sin(theta)^2", 0], [null, null, "L^2"]]
}
)json"},
      {"bumpy_sphere2", R"json({
  "name": "bumpy_sphere2",
  "dim": 2,
  "coords": ["theta", "phi"],
  "params": {"eps": 0.3},
  "domain": [[0.3, 2.8], [0.1, 6.1]],
  "metric": [["1 + eps*cos(theta)^2", 0], [null, "sin(theta)^2"]]
}
)json"},
  };
  return texts;
}

}  // namespace

const std::string& builtin_spec_text(const std::string& name) {
  const auto& texts = catalog_texts();
  auto it = texts.find(name);
  if (it == texts.end()) {
    std::string known;
    for (const auto& [k, v] : texts) {
      if (!known.empty()) known += ", ";
      known += k;
    }
    throw SpecError("unknown catalog key '" + name + "' (known: " + known + ")");
  }
  return it->second;
}

ManifoldSpec builtin_spec(const std::string& name) {
  return parse_manifold(builtin_spec_text(name));
}

std::vector<std::string> builtin_spec_names() {
  std::vector<std::string> names;
  for (const auto& [k, v] : catalog_texts()) names.push_back(k);
  return names;
}

}  // namespace ep
