#pragma once

#include <string>

namespace eqnet {

// SHA-1 hex digest.
std::string sha1_hex(const std::string& data);

// Git blob hash: sha1("blob <size>\0<content>").
std::string git_blob_sha1(const std::string& content);

}  // namespace eqnet
