// Copyright (c) 2026 The dcv Authors
// Licensed under the Apache License, Version 2.0 (see LICENSE file)

#include "dcv/ids.hpp"

#include <cctype>

namespace dcv {

namespace {

bool is_ident_char(char c) {
    return (c >= 'A' && c <= 'Z') || (c >= 'a' && c <= 'z') || (c >= '0' && c <= '9') ||
           c == '_' || c == '-';
}

}  // namespace

bool is_valid_identifier(const std::string& s) {
    if (s.empty() || s.size() > 64) {
        return false;
    }
    for (char c : s) {
        if (!is_ident_char(c)) {
            return false;
        }
    }
    return true;
}

bool is_valid_token(const std::string& s) {
    auto hash = s.find('#');
    if (hash == std::string::npos) {
        return is_valid_identifier(s);
    }
    if (!is_valid_identifier(s.substr(0, hash))) {
        return false;
    }
    std::string suffix = s.substr(hash + 1);
    if (suffix.empty()) {
        return false;
    }
    for (char c : suffix) {
        if (!std::isdigit(static_cast<unsigned char>(c))) {
            return false;
        }
    }
    return true;
}

}  // namespace dcv
