// onebit: channel estimation for massive MIMO uplinks with one-bit ADCs
// Copyright (C) 2026 The onebit authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------

#pragma once

#include <functional>
#include <stdexcept>
#include <string>
#include <string_view>

namespace onebit
{
    enum class ErrorCode
    {
        InvalidArgument,
        DimensionMismatch,
        Numerical,
        Config,
        Io,
    };

    const char *error_code_name(ErrorCode code) noexcept;

    class Error : public std::runtime_error
    {
    public:
        Error(ErrorCode code, const std::string &what) : std::runtime_error(what), code_(code) {}
        ErrorCode code() const noexcept { return code_; }

    private:
        ErrorCode code_;
    };

    [[noreturn]] inline void fail(ErrorCode code, const std::string &what) { throw Error(code, what); }

    inline void require(bool condition, ErrorCode code, const char *what)
    {
        if (!condition)
            fail(code, what);
    }

    // Non-fatal diagnostics (e.g. a TPE coefficient outside its convergence
    // region). The default handler writes to stderr; pass an empty function
    // to restore it.
    using WarningHandler = std::function<void(std::string_view)>;
    void set_warning_handler(WarningHandler handler);
    void warn(std::string_view message);
}
