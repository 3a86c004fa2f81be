#pragma once

#include <cstdio>
#include <string>
#include <vector>

namespace memcap_cli {

// 17 significant digits round-trip any double; %g keeps integers short.
inline std::string format17(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

// Streaming JSON writer with insertion-ordered keys and fixed number
// formatting so identical inputs always produce byte-identical documents.
class JsonWriter {
public:
    JsonWriter& begin_object() {
        separate();
        text_ += '{';
        fresh_ = true;
        return *this;
    }
    JsonWriter& end_object() {
        text_ += '}';
        fresh_ = false;
        return *this;
    }
    JsonWriter& begin_array() {
        separate();
        text_ += '[';
        fresh_ = true;
        return *this;
    }
    JsonWriter& end_array() {
        text_ += ']';
        fresh_ = false;
        return *this;
    }
    JsonWriter& key(const std::string& name) {
        separate();
        quote(name);
        text_ += ':';
        fresh_ = true;
        return *this;
    }
    JsonWriter& value(double v) {
        separate();
        text_ += format17(v);
        return *this;
    }
    JsonWriter& value(long long v) {
        separate();
        text_ += std::to_string(v);
        return *this;
    }
    JsonWriter& value(int v) { return value(static_cast<long long>(v)); }
    JsonWriter& value(bool v) {
        separate();
        text_ += v ? "true" : "false";
        return *this;
    }
    JsonWriter& value(const std::string& v) {
        separate();
        quote(v);
        return *this;
    }
    JsonWriter& value(const char* v) { return value(std::string(v)); }

    const std::string& str() const { return text_; }

private:
    void separate() {
        if (!fresh_ && !text_.empty()) {
            const char last = text_.back();
            if (last != '{' && last != '[' && last != ':') text_ += ',';
        }
        fresh_ = false;
    }
    void quote(const std::string& s) {
        text_ += '"';
        for (char c : s) {
            switch (c) {
                case '"': text_ += "\\\""; break;
                case '\\': text_ += "\\\\"; break;
                case '\n': text_ += "\\n"; break;
                case '\t': text_ += "\\t"; break;
                default: text_ += c;
            }
        }
        text_ += '"';
    }

    std::string text_;
    bool fresh_ = true;
};

// Comma-separated rows, '.' decimal point, header first. Fields are quoted
// only when they contain a delimiter.
class CsvWriter {
public:
    void row(const std::vector<std::string>& fields) {
        for (size_t i = 0; i < fields.size(); ++i) {
            if (i > 0) text_ += ',';
            append_field(fields[i]);
        }
        text_ += '\n';
    }

    const std::string& str() const { return text_; }

private:
    void append_field(const std::string& field) {
        if (field.find_first_of(",\"\n") == std::string::npos) {
            text_ += field;
            return;
        }
        text_ += '"';
        for (char c : field) {
            if (c == '"') text_ += '"';
            text_ += c;
        }
        text_ += '"';
    }

    std::string text_;
};

}  // namespace memcap_cli
