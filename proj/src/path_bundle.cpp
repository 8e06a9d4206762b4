#include "sympath/path_bundle.hpp"

#include <algorithm>

#include "sympath/error.hpp"
#include "sympath/parallel.hpp"

namespace sympath {

struct PathBundle::Impl {
  TimeGrid grid;
  std::size_t n_paths;
  std::uint64_t seed;
  std::string label;
  std::optional<ProcessSpec> spec;
  std::vector<std::string> components;
  std::size_t n_base;
  PathGenerator generator;
  std::vector<PathDerivation> derivations;
  // component-major per path: path p occupies [p * C * (n+1), (p+1) * C * (n+1))
  std::shared_ptr<const std::vector<double>> storage;
};

PathBundle::PathBundle(TimeGrid grid, std::size_t n_paths, std::uint64_t seed, std::string label,
                       std::vector<std::string> components, PathGenerator generator,
                       std::optional<ProcessSpec> spec) {
  SYMPATH_REQUIRE(n_paths >= 1, "bundle: n_paths must be >= 1");
  SYMPATH_REQUIRE(!components.empty(), "bundle: at least one component required");
  auto impl = std::make_shared<Impl>(Impl{grid, n_paths, seed, std::move(label), std::move(spec),
                                          std::move(components), 0, std::move(generator), {}, nullptr});
  impl->n_base = impl->components.size();
  impl_ = std::move(impl);
}

PathBundle PathBundle::from_arrays(TimeGrid grid, std::vector<std::string> components,
                                   const std::vector<std::vector<double>>& arrays, std::string label) {
  SYMPATH_REQUIRE(components.size() == arrays.size(), "bundle: one array per component required");
  const std::size_t points = grid.size();
  SYMPATH_REQUIRE(!arrays.empty() && !arrays[0].empty() && arrays[0].size() % points == 0,
                  "bundle: array length must be a multiple of n_steps + 1");
  const std::size_t n_paths = arrays[0].size() / points;
  for (const auto& a : arrays) SYMPATH_REQUIRE(a.size() == n_paths * points, "bundle: array shape mismatch");
  auto data = std::make_shared<std::vector<double>>(n_paths * points * arrays.size());
  for (std::size_t p = 0; p < n_paths; ++p) {
    for (std::size_t c = 0; c < arrays.size(); ++c) {
      std::copy_n(arrays[c].begin() + static_cast<std::ptrdiff_t>(p * points), points,
                  data->begin() + static_cast<std::ptrdiff_t>((p * arrays.size() + c) * points));
    }
  }
  PathBundle bundle(grid, n_paths, 0, std::move(label), std::move(components), nullptr);
  auto impl = std::make_shared<Impl>(*bundle.impl_);
  impl->storage = std::move(data);
  return PathBundle(std::shared_ptr<const Impl>(std::move(impl)));
}

const TimeGrid& PathBundle::grid() const noexcept { return impl_->grid; }
std::size_t PathBundle::n_paths() const noexcept { return impl_->n_paths; }
std::uint64_t PathBundle::seed() const noexcept { return impl_->seed; }
const std::string& PathBundle::label() const noexcept { return impl_->label; }
const std::optional<ProcessSpec>& PathBundle::spec() const noexcept { return impl_->spec; }
const std::vector<std::string>& PathBundle::components() const noexcept { return impl_->components; }
bool PathBundle::materialized() const noexcept { return impl_->storage != nullptr; }

bool PathBundle::has_component(std::string_view name) const noexcept {
  return std::find(impl_->components.begin(), impl_->components.end(), name) != impl_->components.end();
}

std::size_t PathBundle::component_index(std::string_view name) const {
  const auto it = std::find(impl_->components.begin(), impl_->components.end(), name);
  if (it == impl_->components.end()) {
    throw InvalidArgument("bundle '" + impl_->label + "' has no component '" + std::string(name) + "'");
  }
  return static_cast<std::size_t>(it - impl_->components.begin());
}

PathBuffer PathBundle::make_buffer() const { return PathBuffer(impl_->components.size(), impl_->grid.size()); }

void PathBundle::load(std::size_t path, PathBuffer& buf) const {
  const Impl& im = *impl_;
  const std::size_t points = im.grid.size();
  const std::size_t n_comp = im.components.size();
  if (buf.n_points() != points || buf.n_components() != n_comp) buf = make_buffer();
  if (im.storage) {
    const double* src = im.storage->data() + path * n_comp * points;
    for (std::size_t c = 0; c < n_comp; ++c) std::copy_n(src + c * points, points, buf.component(c).begin());
    return;
  }
  im.generator(path, buf);
  for (std::size_t d = 0; d < im.derivations.size(); ++d) im.derivations[d](buf, buf.component(im.n_base + d));
}

PathBundle PathBundle::with_component(std::string name, PathDerivation derivation) const {
  SYMPATH_REQUIRE(!has_component(name), "bundle: component '" + name + "' already exists");
  auto impl = std::make_shared<Impl>(*impl_);
  impl->components.push_back(std::move(name));
  if (impl->storage) {
    // Extend stored paths with the new component.
    const std::size_t points = impl->grid.size();
    const std::size_t old_c = impl_->components.size();
    auto data = std::make_shared<std::vector<double>>(impl->n_paths * (old_c + 1) * points);
    PathBuffer buf(old_c + 1, points);
    for (std::size_t p = 0; p < impl->n_paths; ++p) {
      const double* src = impl_->storage->data() + p * old_c * points;
      for (std::size_t c = 0; c < old_c; ++c) std::copy_n(src + c * points, points, buf.component(c).begin());
      derivation(buf, buf.component(old_c));
      for (std::size_t c = 0; c <= old_c; ++c) {
        std::copy_n(buf.component(c).begin(), points, data->begin() + static_cast<std::ptrdiff_t>((p * (old_c + 1) + c) * points));
      }
    }
    impl->storage = std::move(data);
    impl->n_base = impl->components.size();
  } else {
    impl->derivations.push_back(std::move(derivation));
  }
  return PathBundle(std::shared_ptr<const Impl>(std::move(impl)));
}

PathBundle PathBundle::materialize() const {
  if (impl_->storage) return *this;
  const std::size_t points = impl_->grid.size();
  const std::size_t n_comp = impl_->components.size();
  auto data = std::make_shared<std::vector<double>>(impl_->n_paths * n_comp * points);
  for_each_path(*this, [&](std::size_t p, const PathBuffer& buf) {
    for (std::size_t c = 0; c < n_comp; ++c) {
      std::copy_n(buf.component(c).begin(), points, data->begin() + static_cast<std::ptrdiff_t>((p * n_comp + c) * points));
    }
  });
  auto impl = std::make_shared<Impl>(*impl_);
  impl->storage = std::move(data);
  impl->n_base = n_comp;
  impl->derivations.clear();
  return PathBundle(std::shared_ptr<const Impl>(std::move(impl)));
}

std::vector<double> PathBundle::component_array(std::string_view name) const {
  const std::size_t c = component_index(name);
  const std::size_t points = impl_->grid.size();
  std::vector<double> out(impl_->n_paths * points);
  for_each_path(*this, [&](std::size_t p, const PathBuffer& buf) {
    std::copy_n(buf.component(c).begin(), points, out.begin() + static_cast<std::ptrdiff_t>(p * points));
  });
  return out;
}

}  // namespace sympath
