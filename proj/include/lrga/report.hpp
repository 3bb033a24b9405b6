#pragma once

#include <string>
#include <string_view>

#include <json.hpp>

namespace lrga {

/// %.17g, with non-finite values spelled "nan", "inf", "-inf".
std::string format_double(double v);

/// JSON text in which every floating-point number carries 17 significant
/// digits. Non-finite floats become strings. Object keys keep nlohmann's
/// sorted order, so equal documents serialize identically.
std::string dump_json(const nlohmann::json& j, int indent = 2);

/// Writes `content` to `path`, creating parent directories.
void write_text_file(const std::string& path, std::string_view content);

}  // namespace lrga
