#pragma once

// Minimal JSON emitter for the machine-readable report. Floating-point
// values are printed with 17 significant digits, which round-trips every
// double exactly; a hand-rolled writer keeps that guarantee explicit instead
// of depending on a library's formatting choices.

#include <cmath>
#include <cstdio>
#include <cstdint>
#include <string>
#include <vector>

namespace pcomb {

class JsonWriter {
public:
    std::string str() && { return std::move(out_); }
    const std::string& str() const& { return out_; }

    JsonWriter& begin_object() {
        separate();
        out_ += '{';
        stack_.push_back(true);
        return *this;
    }
    JsonWriter& end_object() {
        out_ += '}';
        stack_.pop_back();
        return *this;
    }
    JsonWriter& begin_array() {
        separate();
        out_ += '[';
        stack_.push_back(true);
        return *this;
    }
    JsonWriter& end_array() {
        out_ += ']';
        stack_.pop_back();
        return *this;
    }

    JsonWriter& key(const char* name) {
        separate();
        append_string(name);
        out_ += ':';
        pending_value_ = true;
        return *this;
    }

    JsonWriter& value(double v) {
        separate();
        if (std::isfinite(v)) {
            char buf[32];
            std::snprintf(buf, sizeof buf, "%.17g", v);
            out_ += buf;
        } else if (std::isnan(v)) {
            // JSON has no non-finite numbers; strings keep the report valid.
            out_ += "\"nan\"";
        } else {
            out_ += v > 0 ? "\"inf\"" : "\"-inf\"";
        }
        return *this;
    }
    JsonWriter& value(int v) { return value(static_cast<std::int64_t>(v)); }
    JsonWriter& value(std::int64_t v) {
        separate();
        out_ += std::to_string(v);
        return *this;
    }
    JsonWriter& value(std::uint64_t v) {
        separate();
        out_ += std::to_string(v);
        return *this;
    }
    JsonWriter& value(bool v) {
        separate();
        out_ += v ? "true" : "false";
        return *this;
    }
    JsonWriter& value(const std::string& v) {
        separate();
        append_string(v.c_str());
        return *this;
    }
    JsonWriter& value(const char* v) {
        separate();
        append_string(v);
        return *this;
    }

private:
    void separate() {
        if (pending_value_) {
            pending_value_ = false;
            return;
        }
        if (!stack_.empty()) {
            if (!stack_.back()) {
                out_ += ',';
            }
            stack_.back() = false;
        }
    }

    void append_string(const char* s) {
        out_ += '"';
        for (; *s; ++s) {
            const char c = *s;
            switch (c) {
            case '"': out_ += "\\\""; break;
            case '\\': out_ += "\\\\"; break;
            case '\n': out_ += "\\n"; break;
            case '\t': out_ += "\\t"; break;
            case '\r': out_ += "\\r"; break;
            default:
                if (static_cast<unsigned char>(c) < 0x20) {
                    char buf[8];
                    std::snprintf(buf, sizeof buf, "\\u%04x", c);
                    out_ += buf;
                } else {
                    out_ += c;
                }
            }
        }
        out_ += '"';
    }

    std::string out_;
    std::vector<bool> stack_; // per open container: true until first element
    bool pending_value_ = false;
};

} // namespace pcomb
