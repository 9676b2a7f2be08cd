#pragma once

#include <memory>
#include <utility>

namespace qsocount {

// Immutable shared node handle with value equality. Lets recursive variant
// ASTs keep defaulted comparisons while sharing subtrees.
template <class T>
class Box {
 public:
  Box() = default;
  Box(T value) : ptr_(std::make_shared<const T>(std::move(value))) {}  // NOLINT(implicit)

  const T& operator*() const { return *ptr_; }
  const T* operator->() const { return ptr_.get(); }
  const T* get() const { return ptr_.get(); }
  explicit operator bool() const { return static_cast<bool>(ptr_); }

  friend bool operator==(const Box& a, const Box& b) {
    if (a.ptr_ == b.ptr_) return true;
    if (!a.ptr_ || !b.ptr_) return false;
    return *a.ptr_ == *b.ptr_;
  }

 private:
  std::shared_ptr<const T> ptr_;
};

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

}  // namespace qsocount
