#include "unfollow/json_io.h"

#include <cmath>
#include <cstdio>
#include <istream>
#include <ostream>
#include <string>

#include "unfollow/error.h"
#include "unfollow/serialization.h"

namespace unfollow {
namespace {

void write_value(const nlohmann::json& v, std::ostream& out, int indent) {
    const std::string pad(static_cast<std::size_t>(indent) * 2, ' ');
    const std::string inner(static_cast<std::size_t>(indent + 1) * 2, ' ');
    switch (v.type()) {
        case nlohmann::json::value_t::object: {
            if (v.empty()) {
                out << "{}";
                return;
            }
            out << "{\n";
            bool first = true;
            for (auto it = v.begin(); it != v.end(); ++it) {
                if (!first) out << ",\n";
                first = false;
                out << inner << nlohmann::json(it.key()).dump() << ": ";
                write_value(it.value(), out, indent + 1);
            }
            out << '\n' << pad << '}';
            return;
        }
        case nlohmann::json::value_t::array: {
            if (v.empty()) {
                out << "[]";
                return;
            }
            out << "[\n";
            for (std::size_t i = 0; i < v.size(); ++i) {
                if (i) out << ",\n";
                out << inner;
                write_value(v[i], out, indent + 1);
            }
            out << '\n' << pad << ']';
            return;
        }
        case nlohmann::json::value_t::number_float: {
            const double x = v.get<double>();
            if (!std::isfinite(x)) throw InputError("cannot serialize a non-finite number to JSON");
            char buf[48];
            std::snprintf(buf, sizeof buf, "%#.17g", x);
            out << buf;
            return;
        }
        default:
            out << v.dump();
    }
}

}  // namespace

void write_report_json(const nlohmann::json& value, std::ostream& out) {
    write_value(value, out, 0);
    out << '\n';
}

void check_container(const nlohmann::json& j, const char* format, int version) {
    if (!j.is_object() || !j.contains("format") || !j["format"].is_string() ||
        j["format"].get<std::string>() != format) {
        throw SchemaError(std::string("expected a '") + format + "' container");
    }
    if (!j.contains("version") || !j["version"].is_number_integer() || j["version"].get<int>() != version) {
        throw SchemaError(std::string(format) + ": unsupported version");
    }
}

nlohmann::json read_json(std::istream& in, const char* what) {
    try {
        nlohmann::json j;
        in >> j;
        return j;
    } catch (const nlohmann::json::exception& e) {
        throw SchemaError(std::string(what) + ": " + e.what());
    }
}

}  // namespace unfollow
