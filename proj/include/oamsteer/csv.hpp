// SPDX-License-Identifier: Apache-2.0
//
// Minimal RFC-4180 writer. Numbers use the shortest round-trip representation.

#pragma once

#include <initializer_list>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

namespace oam
{
    std::string csv_quote(std::string_view field);
    std::string format_number(double value);
    std::string format_number(long long value);

    class CsvWriter
    {
    public:
        explicit CsvWriter(std::ostream &out) : out_(out) {}

        void header(std::initializer_list<std::string_view> names);
        void row(const std::vector<std::string> &fields);

    private:
        std::ostream &out_;
    };
}
