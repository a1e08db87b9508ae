#pragma once

#include <map>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "cgc/tensor.hpp"

namespace cgc {

struct Parameter {
  Tensor value;
  Tensor grad;
};

// Named trainable tensors. Iteration order is lexicographic by name, so every
// pass over the store (optimizer, EMA, checkpoint) is deterministic.
class ParamStore {
 public:
  Parameter& add(const std::string& name, Tensor init);
  Parameter& get(const std::string& name);
  const Parameter& get(const std::string& name) const;
  bool contains(const std::string& name) const { return params_.count(name) != 0; }
  std::size_t size() const { return params_.size(); }
  std::size_t num_values() const;

  void zero_grad();

  auto begin() { return params_.begin(); }
  auto end() { return params_.end(); }
  auto begin() const { return params_.begin(); }
  auto end() const { return params_.end(); }

  // {"name": {"shape": [...], "values": [...]}, ...}; doubles are written with
  // round-trip precision so load(save(x)) is bit-exact.
  nlohmann::json to_json() const;
  static ParamStore from_json(const nlohmann::json& j);

  // Overwrites values of existing entries; every name and shape must match.
  void assign_values(const ParamStore& other);

 private:
  std::map<std::string, Parameter> params_;
};

}  // namespace cgc
