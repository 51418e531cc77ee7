#pragma once

// Minimal JSON emitter for reports. Deliberately not a general library:
// keys keep insertion order and doubles are written with up to 17
// significant digits via to_chars, so identical runs emit identical bytes.

#include <charconv>
#include <cmath>
#include <cstdint>
#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "ridgechev/errors.hpp"

namespace ridgechev {

class Json {
 public:
  static Json object() { return Json(Kind::object); }
  static Json array() { return Json(Kind::array); }
  static Json null() { return Json(Kind::null); }
  static Json boolean(bool b) {
    Json j(Kind::boolean);
    j.bool_ = b;
    return j;
  }
  static Json integer(std::int64_t i) {
    Json j(Kind::integer);
    j.int_ = i;
    return j;
  }
  static Json number(double d) {
    if (!std::isfinite(d)) throw internal_error("refusing to serialize a non-finite number");
    Json j(Kind::number);
    j.num_ = d;
    return j;
  }
  static Json string(std::string s) {
    Json j(Kind::string);
    j.str_ = std::move(s);
    return j;
  }
  template <typename Seq>
  static Json number_array(const Seq& xs) {
    Json j = array();
    for (double x : xs) j.push(number(x));
    return j;
  }
  template <typename Seq>
  static Json integer_array(const Seq& xs) {
    Json j = array();
    for (auto x : xs) j.push(integer(x));
    return j;
  }

  Json& set(std::string key, Json value) {
    if (kind_ != Kind::object) throw internal_error("set() on a non-object json value");
    members_.emplace_back(std::move(key), std::move(value));
    return *this;
  }
  Json& push(Json value) {
    if (kind_ != Kind::array) throw internal_error("push() on a non-array json value");
    items_.push_back(std::move(value));
    return *this;
  }

  std::string dump() const {
    std::string out;
    write(out);
    return out;
  }

 private:
  enum class Kind { null, boolean, integer, number, string, array, object };
  explicit Json(Kind k) : kind_(k) {}

  static void write_escaped(std::string& out, const std::string& s) {
    out += '"';
    for (char ch : s) {
      switch (ch) {
        case '"': out += "\\\""; break;
        case '\\': out += "\\\\"; break;
        case '\b': out += "\\b"; break;
        case '\f': out += "\\f"; break;
        case '\n': out += "\\n"; break;
        case '\r': out += "\\r"; break;
        case '\t': out += "\\t"; break;
        default:
          if (static_cast<unsigned char>(ch) < 0x20) {
            const char* hex = "0123456789abcdef";
            out += "\\u00";
            out += hex[(ch >> 4) & 0xf];
            out += hex[ch & 0xf];
          } else {
            out += ch;
          }
      }
    }
    out += '"';
  }

  void write(std::string& out) const {
    switch (kind_) {
      case Kind::null: out += "null"; break;
      case Kind::boolean: out += bool_ ? "true" : "false"; break;
      case Kind::integer: {
        char buf[24];
        auto r = std::to_chars(buf, buf + sizeof buf, int_);
        out.append(buf, r.ptr);
        break;
      }
      case Kind::number: {
        char buf[40];
        auto r = std::to_chars(buf, buf + sizeof buf, num_, std::chars_format::general, 17);
        out.append(buf, r.ptr);
        break;
      }
      case Kind::string: write_escaped(out, str_); break;
      case Kind::array: {
        out += '[';
        for (std::size_t i = 0; i < items_.size(); ++i) {
          if (i) out += ',';
          items_[i].write(out);
        }
        out += ']';
        break;
      }
      case Kind::object: {
        out += '{';
        for (std::size_t i = 0; i < members_.size(); ++i) {
          if (i) out += ',';
          write_escaped(out, members_[i].first);
          out += ':';
          members_[i].second.write(out);
        }
        out += '}';
        break;
      }
    }
  }

  Kind kind_;
  bool bool_ = false;
  std::int64_t int_ = 0;
  double num_ = 0.0;
  std::string str_;
  std::vector<Json> items_;
  std::vector<std::pair<std::string, Json>> members_;
};

} // namespace ridgechev
