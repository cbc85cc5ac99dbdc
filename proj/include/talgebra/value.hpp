#pragma once

#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "talgebra/errors.hpp"
#include "talgebra/geom.hpp"
#include "talgebra/types.hpp"

namespace talgebra {

// A typed runtime value: the payload kinds cover all carrier sets used by
// the engines (strings over an alphabet, truth values, reals, object
// feature vectors, pictures).
class Value {
 public:
  using Payload =
      std::variant<std::string, bool, double, std::vector<double>,
                   geom::Picture>;

  Value(TypeName type, Payload payload)
      : type_(std::move(type)), p_(std::move(payload)) {}

  const TypeName& type() const { return type_; }
  const Payload& payload() const { return p_; }

  const std::string& as_string() const { return get<std::string>("string"); }
  bool as_bool() const { return get<bool>("bool"); }
  double as_real() const { return get<double>("real"); }
  const std::vector<double>& as_vector() const {
    return get<std::vector<double>>("vector");
  }
  const geom::Picture& as_picture() const {
    return get<geom::Picture>("picture");
  }

  bool operator==(const Value& o) const {
    return type_ == o.type_ && p_ == o.p_;
  }

 private:
  template <class T>
  const T& get(const char* what) const {
    const T* v = std::get_if<T>(&p_);
    if (!v)
      fail(ErrorCode::domain_error,
           std::string("value of type ") + type_.name + " is not a " + what);
    return *v;
  }

  TypeName type_;
  Payload p_;
};

}  // namespace talgebra
