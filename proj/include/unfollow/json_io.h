#pragma once

#include <iosfwd>

#include <json.hpp>

namespace unfollow {

// Pretty-printed JSON where every floating-point number carries 17
// significant digits (e.g. 0.5 -> 0.50000000000000000). Integers and other
// values print as usual. Throws InputError on a non-finite number.
void write_report_json(const nlohmann::json& value, std::ostream& out);

}  // namespace unfollow
