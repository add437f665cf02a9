#pragma once

#include <string>
#include <vector>

#include "uaos/catalog.hpp"
#include "uaos/certificate.hpp"

namespace uaos {

/// Construct a named certificate bound to a catalog system. Recognized
/// presets (the bound system must match):
///   decoupled-thm1, decoupled-prop1        (decoupled_linear)
///   example1-thm2, example1-w-as-thm1,
///   example1-gamma-zero                    (example1)
///   example2-cor1, example2-prop1          (example2)
///   adaptive-thm3                          (adaptive_redesigned)
/// Closed-form derivative hooks are attached wherever the catalog system
/// admits them, so margin checks are exact up to rounding.
Certificate make_certificate(const std::string& preset, const BuiltinSystem& sys);

std::vector<std::string> certificate_presets();

}  // namespace uaos
