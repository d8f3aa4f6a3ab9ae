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

#include "onebit/error.hpp"

#include <iostream>
#include <mutex>

namespace onebit
{
    const char *error_code_name(ErrorCode code) noexcept
    {
        switch (code)
        {
        case ErrorCode::InvalidArgument:
            return "invalid_argument";
        case ErrorCode::DimensionMismatch:
            return "dimension_mismatch";
        case ErrorCode::Numerical:
            return "numerical";
        case ErrorCode::Config:
            return "config";
        case ErrorCode::Io:
            return "io";
        }
        return "unknown";
    }

    namespace
    {
        std::mutex handler_mutex;
        WarningHandler handler;
    }

    void set_warning_handler(WarningHandler h)
    {
        std::lock_guard lock(handler_mutex);
        handler = std::move(h);
    }

    void warn(std::string_view message)
    {
        std::lock_guard lock(handler_mutex);
        if (handler)
            handler(message);
        else
            std::cerr << "warning: " << message << '\n';
    }
}
