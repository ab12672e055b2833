#pragma once

#include <fstream>
#include <memory>
#include <sstream>
#include <variant>

#include "ringcap/core.hpp"

namespace ringcap {

// ---------------------------------------------------------------------------
// Insertion-ordered JSON tree with fixed 12-significant-digit float
// formatting, so identical runs serialize to identical bytes.
// ---------------------------------------------------------------------------

class Json {
 public:
  using Array = std::vector<Json>;
  using Object = std::vector<std::pair<std::string, Json>>;

  Json() : value_(nullptr) {}
  Json(std::nullptr_t) : value_(nullptr) {}
  Json(bool b) : value_(b) {}
  Json(int v) : value_(static_cast<int64_t>(v)) {}
  Json(long v) : value_(static_cast<int64_t>(v)) {}
  Json(long long v) : value_(static_cast<int64_t>(v)) {}
  Json(std::size_t v) : value_(static_cast<int64_t>(v)) {}
  Json(double v) : value_(v) {}
  Json(const char* s) : value_(std::string(s)) {}
  Json(std::string s) : value_(std::move(s)) {}

  static Json array() {
    Json j;
    j.value_ = Array{};
    return j;
  }
  static Json object() {
    Json j;
    j.value_ = Object{};
    return j;
  }

  Json& push_back(Json v) {
    std::get<Array>(value_).push_back(std::move(v));
    return *this;
  }

  Json& set(const std::string& key, Json v) {
    auto& obj = std::get<Object>(value_);
    for (auto& [k, val] : obj)
      if (k == key) {
        val = std::move(v);
        return *this;
      }
    obj.emplace_back(key, std::move(v));
    return *this;
  }

  std::string dump(int indent = 2) const {
    std::ostringstream os;
    write(os, indent, 0);
    os << "\n";
    return os.str();
  }

  void write_file(const std::string& path, int indent = 2) const {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + path);
    out << dump(indent);
  }

 private:
  std::variant<std::nullptr_t, bool, int64_t, double, std::string, Array, Object> value_;

  static void escape(std::ostream& os, const std::string& s) {
    os << '"';
    for (char c : s) {
      switch (c) {
        case '"': os << "\\\""; break;
        case '\\': os << "\\\\"; break;
        case '\n': os << "\\n"; break;
        case '\t': os << "\\t"; break;
        case '\r': os << "\\r"; break;
        default:
          if (static_cast<unsigned char>(c) < 0x20) {
            char buf[8];
            std::snprintf(buf, sizeof(buf), "\\u%04x", c);
            os << buf;
          } else {
            os << c;
          }
      }
    }
    os << '"';
  }

  void write(std::ostream& os, int indent, int depth) const {
    std::string pad(static_cast<size_t>(indent * (depth + 1)), ' ');
    std::string pad_end(static_cast<size_t>(indent * depth), ' ');
    switch (value_.index()) {
      case 0: os << "null"; break;
      case 1: os << (std::get<bool>(value_) ? "true" : "false"); break;
      case 2: os << std::get<int64_t>(value_); break;
      case 3: {
        double d = std::get<double>(value_);
        if (std::isfinite(d)) {
          os << format_double(d, 12);
        } else {
          os << (std::isnan(d) ? "\"nan\"" : (d > 0 ? "\"inf\"" : "\"-inf\""));
        }
        break;
      }
      case 4: escape(os, std::get<std::string>(value_)); break;
      case 5: {
        const auto& arr = std::get<Array>(value_);
        if (arr.empty()) {
          os << "[]";
          break;
        }
        os << "[\n";
        for (std::size_t i = 0; i < arr.size(); ++i) {
          os << pad;
          arr[i].write(os, indent, depth + 1);
          os << (i + 1 < arr.size() ? ",\n" : "\n");
        }
        os << pad_end << "]";
        break;
      }
      case 6: {
        const auto& obj = std::get<Object>(value_);
        if (obj.empty()) {
          os << "{}";
          break;
        }
        os << "{\n";
        for (std::size_t i = 0; i < obj.size(); ++i) {
          os << pad;
          escape(os, obj[i].first);
          os << ": ";
          obj[i].second.write(os, indent, depth + 1);
          os << (i + 1 < obj.size() ? ",\n" : "\n");
        }
        os << pad_end << "}";
        break;
      }
    }
  }
};

// ---------------------------------------------------------------------------
// CSV ledger writer.
// ---------------------------------------------------------------------------

class CsvWriter {
 public:
  explicit CsvWriter(std::vector<std::string> header) : header_(std::move(header)) {}

  void add_row(std::vector<std::string> cells) {
    if (cells.size() != header_.size()) throw std::invalid_argument("csv row width mismatch");
    rows_.push_back(std::move(cells));
  }

  std::string dump() const {
    std::ostringstream os;
    write_line(os, header_);
    for (const auto& r : rows_) write_line(os, r);
    return os.str();
  }

  void write_file(const std::string& path) const {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + path);
    out << dump();
  }

 private:
  static void write_line(std::ostream& os, const std::vector<std::string>& cells) {
    for (std::size_t i = 0; i < cells.size(); ++i) {
      const std::string& c = cells[i];
      bool quote = c.find_first_of(",\"\n") != std::string::npos;
      if (quote) {
        os << '"';
        for (char ch : c) {
          if (ch == '"') os << '"';
          os << ch;
        }
        os << '"';
      } else {
        os << c;
      }
      os << (i + 1 < cells.size() ? "," : "\n");
    }
  }

  std::vector<std::string> header_;
  std::vector<std::vector<std::string>> rows_;
};

// ---------------------------------------------------------------------------
// Minimal SVG canvas for domain outlines and curve overlays.
// ---------------------------------------------------------------------------

class SvgCanvas {
 public:
  SvgCanvas(const Box2& world, int width_px = 640) : world_(world) {
    width_ = width_px;
    height_ = static_cast<int>(width_px * world.extent(1) / world.extent(0));
  }

  void add_circle(const Vec2& center, double radius, const std::string& stroke,
                  double stroke_width = 1.5, const std::string& fill = "none") {
    auto [cx, cy] = to_px(center);
    body_ << "  <circle cx=\"" << cx << "\" cy=\"" << cy << "\" r=\""
          << radius * scale_x() << "\" stroke=\"" << stroke << "\" stroke-width=\""
          << stroke_width << "\" fill=\"" << fill << "\"/>\n";
  }

  void add_rect(const Box2& r, const std::string& stroke, double stroke_width = 1.5) {
    auto [x0, y1] = to_px(r.lo);
    auto [x1, y0] = to_px(r.hi);
    body_ << "  <rect x=\"" << x0 << "\" y=\"" << y0 << "\" width=\"" << (x1 - x0)
          << "\" height=\"" << (y1 - y0) << "\" stroke=\"" << stroke
          << "\" stroke-width=\"" << stroke_width << "\" fill=\"none\"/>\n";
  }

  void add_polyline(const std::vector<Vec2>& pts, const std::string& stroke,
                    double stroke_width = 2.0) {
    body_ << "  <polyline points=\"";
    for (const auto& p : pts) {
      auto [x, y] = to_px(p);
      body_ << x << "," << y << " ";
    }
    body_ << "\" stroke=\"" << stroke << "\" stroke-width=\"" << stroke_width
          << "\" fill=\"none\"/>\n";
  }

  void add_dot(const Vec2& p, const std::string& fill, double radius_px = 3.5) {
    auto [cx, cy] = to_px(p);
    body_ << "  <circle cx=\"" << cx << "\" cy=\"" << cy << "\" r=\"" << radius_px
          << "\" fill=\"" << fill << "\"/>\n";
  }

  std::string dump() const {
    std::ostringstream os;
    os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width_
       << "\" height=\"" << height_ << "\" viewBox=\"0 0 " << width_ << " " << height_
       << "\">\n";
    os << "  <rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    os << body_.str();
    os << "</svg>\n";
    return os.str();
  }

  void write_file(const std::string& path) const {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + path);
    out << dump();
  }

 private:
  double scale_x() const { return width_ / world_.extent(0); }

  std::pair<double, double> to_px(const Vec2& p) const {
    double x = (p[0] - world_.lo[0]) / world_.extent(0) * width_;
    double y = (world_.hi[1] - p[1]) / world_.extent(1) * height_;
    return {x, y};
  }

  Box2 world_;
  int width_ = 0, height_ = 0;
  std::ostringstream body_;
};

}  // namespace ringcap
