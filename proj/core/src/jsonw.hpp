#pragma once

// Minimal deterministic JSON writer: insertion-ordered fields, reals printed
// with %.17g. The vendored parser reads these back for round-trip tests.

#include <cstdio>
#include <string>
#include <vector>

namespace crc::jsonw {

inline std::string num(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

inline std::string num(long long v) { return std::to_string(v); }
inline std::string num(int v) { return std::to_string(v); }

inline std::string quote(const std::string& s) {
    std::string out = "\"";
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
                    std::snprintf(buf, sizeof(buf), "\\u%04x", c);
                    out += buf;
                } else {
                    out += c;
                }
        }
    }
    out += '"';
    return out;
}

class Obj;

class Val {
public:
    static Val raw(std::string s) {
        Val v;
        v.text_ = std::move(s);
        return v;
    }
    const std::string& text() const { return text_; }

private:
    std::string text_;
};

class Arr {
public:
    Arr& push(const std::string& raw_item) {
        items_.push_back(raw_item);
        return *this;
    }
    std::string str() const {
        std::string out = "[";
        for (size_t i = 0; i < items_.size(); ++i) {
            if (i) out += ",";
            out += items_[i];
        }
        out += "]";
        return out;
    }

private:
    std::vector<std::string> items_;
};

class Obj {
public:
    Obj& field(const std::string& key, const std::string& raw_value) {
        fields_.emplace_back(key, raw_value);
        return *this;
    }
    Obj& str(const std::string& key, const std::string& value) {
        return field(key, quote(value));
    }
    Obj& real(const std::string& key, double v) { return field(key, num(v)); }
    Obj& integer(const std::string& key, long long v) { return field(key, num(v)); }
    Obj& boolean(const std::string& key, bool v) { return field(key, v ? "true" : "false"); }

    std::string str() const {
        std::string out = "{";
        for (size_t i = 0; i < fields_.size(); ++i) {
            if (i) out += ",";
            out += quote(fields_[i].first) + ":" + fields_[i].second;
        }
        out += "}";
        return out;
    }

private:
    std::vector<std::pair<std::string, std::string>> fields_;
};

} // namespace crc::jsonw
