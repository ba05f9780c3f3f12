#pragma once

// Shim for builds without the system nlohmann-json package: exposes the
// vendored single header under the canonical include path.
#include "../../../vendor/json.hpp"
