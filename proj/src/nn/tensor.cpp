/*
 * Copyright 2026 The cranhl Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include "cranhl/nn/tensor.hpp"

#include <cmath>
#include <sstream>

namespace cranhl::nn {

std::size_t shape_count(const Shape& s) {
  std::size_t n = 1;
  for (std::size_t d : s) n *= d;
  return n;
}

std::string shape_str(const Shape& s) {
  std::ostringstream os;
  os << '[';
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (i) os << 'x';
    os << s[i];
  }
  os << ']';
  return os.str();
}

Tensor::Tensor(Shape shape) : impl_(std::make_shared<Impl>()) {
  impl_->values.assign(shape_count(shape), 0.0);
  impl_->shape = std::move(shape);
}

Tensor::Tensor(Shape shape, std::vector<double> values)
    : impl_(std::make_shared<Impl>()) {
  if (shape_count(shape) != values.size()) {
    throw InvalidShapeError("tensor: " + shape_str(shape) + " cannot hold " +
                            std::to_string(values.size()) + " values");
  }
  impl_->shape = std::move(shape);
  impl_->values = std::move(values);
}

Tensor Tensor::scalar(double value) { return Tensor({1}, {value}); }

Tensor Tensor::zeros_like(const Tensor& other) {
  return Tensor(other.shape());
}

double Tensor::item() const {
  if (size() != 1) {
    throw InvalidShapeError("tensor: item() needs a single-element tensor");
  }
  return impl_->values[0];
}

std::vector<double>& Tensor::grad() {
  if (impl_->grad.empty()) impl_->grad.assign(impl_->values.size(), 0.0);
  return impl_->grad;
}

void Tensor::zero_grad() {
  if (!impl_->grad.empty()) {
    std::fill(impl_->grad.begin(), impl_->grad.end(), 0.0);
  }
}

void Tensor::drop_grad() { impl_->grad.clear(); }

Tensor Tensor::reshaped(Shape shape) const {
  if (shape_count(shape) != size()) {
    throw InvalidShapeError("tensor: reshape " + shape_str(this->shape()) +
                            " -> " + shape_str(shape) + " changes size");
  }
  Tensor t;
  t.impl_ = impl_;
  // Storage is shared, so reshaping mutates the view for all handles; the
  // engine only reshapes tensors it just created.
  t.impl_->shape = std::move(shape);
  return t;
}

Tensor Tensor::clone() const {
  Tensor t(impl_->shape, impl_->values);
  t.impl_->needs_grad = impl_->needs_grad;
  return t;
}

void Tensor::check_finite(const char* where) const {
  for (double v : impl_->values) {
    if (!std::isfinite(v)) {
      throw ContractViolation(std::string(where) +
                              ": produced a non-finite value");
    }
  }
}

}  // namespace cranhl::nn
