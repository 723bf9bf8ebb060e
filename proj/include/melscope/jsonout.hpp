#pragma once

#include <cstdio>
#include <cstdint>
#include <memory>
#include <string>
#include <utility>
#include <vector>

namespace melscope {

/// Minimal JSON document builder.  Objects keep insertion order and doubles
/// are printed with %.17g so every payload number round-trips exactly.
class JsonValue {
public:
    static JsonValue object() { return JsonValue(Kind::Object); }
    static JsonValue array() { return JsonValue(Kind::Array); }
    static JsonValue str(std::string s) {
        JsonValue v(Kind::String);
        v.str_ = std::move(s);
        return v;
    }
    static JsonValue number(double x) {
        JsonValue v(Kind::Number);
        v.num_ = x;
        return v;
    }
    static JsonValue integer(long long x) {
        JsonValue v(Kind::Integer);
        v.int_ = x;
        return v;
    }
    static JsonValue boolean(bool b) {
        JsonValue v(Kind::Bool);
        v.bool_ = b;
        return v;
    }

    JsonValue& set(const std::string& key, JsonValue v) {
        fields_.emplace_back(key, std::move(v));
        return *this;
    }
    JsonValue& push(JsonValue v) {
        items_.push_back(std::move(v));
        return *this;
    }

    std::string dump() const {
        std::string out;
        write(out);
        return out;
    }

private:
    enum class Kind { Object, Array, String, Number, Integer, Bool };
    explicit JsonValue(Kind k) : kind_(k) {}

    static void escape(const std::string& s, std::string& out) {
        out += '"';
        for (char c : s) {
            switch (c) {
                case '"': out += "\\\""; break;
                case '\\': out += "\\\\"; break;
                case '\n': out += "\\n"; break;
                case '\t': out += "\\t"; break;
                case '\r': out += "\\r"; break;
                default:
                    if (static_cast<unsigned char>(c) < 0x20) {
                        char buf[8];
                        std::snprintf(buf, sizeof buf, "\\u%04x", c);
                        out += buf;
                    } else {
                        out += c;
                    }
            }
        }
        out += '"';
    }

    void write(std::string& out) const {
        switch (kind_) {
            case Kind::Object: {
                out += '{';
                bool first = true;
                for (const auto& [k, v] : fields_) {
                    if (!first) out += ',';
                    first = false;
                    escape(k, out);
                    out += ':';
                    v.write(out);
                }
                out += '}';
                break;
            }
            case Kind::Array: {
                out += '[';
                bool first = true;
                for (const auto& v : items_) {
                    if (!first) out += ',';
                    first = false;
                    v.write(out);
                }
                out += ']';
                break;
            }
            case Kind::String: escape(str_, out); break;
            case Kind::Number: {
                char buf[64];
                const double x = num_ == 0.0 ? 0.0 : num_;  // no negative zero
                std::snprintf(buf, sizeof buf, "%.17g", x);
                out += buf;
                break;
            }
            case Kind::Integer: {
                char buf[32];
                std::snprintf(buf, sizeof buf, "%lld", int_);
                out += buf;
                break;
            }
            case Kind::Bool: out += bool_ ? "true" : "false"; break;
        }
    }

    Kind kind_;
    std::vector<std::pair<std::string, JsonValue>> fields_;
    std::vector<JsonValue> items_;
    std::string str_;
    double num_ = 0.0;
    long long int_ = 0;
    bool bool_ = false;
};

}  // namespace melscope
