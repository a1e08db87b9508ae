#include "cgc/param_store.hpp"

#include "cgc/errors.hpp"

namespace cgc {

Parameter& ParamStore::add(const std::string& name, Tensor init) {
  if (params_.count(name)) throw ConfigError("duplicate parameter name: " + name);
  Tensor grad(init.shape());
  auto [it, _] = params_.emplace(name, Parameter{std::move(init), std::move(grad)});
  return it->second;
}

Parameter& ParamStore::get(const std::string& name) {
  auto it = params_.find(name);
  if (it == params_.end()) throw IndexError("unknown parameter: " + name);
  return it->second;
}

const Parameter& ParamStore::get(const std::string& name) const {
  auto it = params_.find(name);
  if (it == params_.end()) throw IndexError("unknown parameter: " + name);
  return it->second;
}

std::size_t ParamStore::num_values() const {
  std::size_t n = 0;
  for (const auto& [_, p] : params_) n += p.value.size();
  return n;
}

void ParamStore::zero_grad() {
  for (auto& [_, p] : params_) p.grad.fill(0.0);
}

nlohmann::json ParamStore::to_json() const {
  nlohmann::json j = nlohmann::json::object();
  for (const auto& [name, p] : params_) {
    j[name] = {{"shape", p.value.shape()}, {"values", p.value.raw()}};
  }
  return j;
}

ParamStore ParamStore::from_json(const nlohmann::json& j) {
  ParamStore store;
  for (const auto& [name, entry] : j.items()) {
    auto shape = entry.at("shape").get<Shape>();
    auto values = entry.at("values").get<std::vector<double>>();
    store.add(name, Tensor(std::move(shape), std::move(values)));
  }
  return store;
}

void ParamStore::assign_values(const ParamStore& other) {
  if (other.size() != size()) throw DimensionError("parameter stores differ in entry count");
  for (auto& [name, p] : params_) {
    const auto& src = other.get(name);
    if (src.value.shape() != p.value.shape())
      throw DimensionError("parameter " + name + ": shape " + shape_str(src.value.shape()) +
                           " vs " + shape_str(p.value.shape()));
    p.value = src.value;
  }
}

}  // namespace cgc
