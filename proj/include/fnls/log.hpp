#pragma once

#include <string>
#include <string_view>

namespace fnls {

// Warning on stderr; each category prints at most a few times per process.
void warn(std::string_view category, const std::string& message);
void set_warnings_enabled(bool enabled);

}  // namespace fnls
