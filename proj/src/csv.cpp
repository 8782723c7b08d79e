// SPDX-License-Identifier: Apache-2.0

#include "oamsteer/csv.hpp"

#include <array>
#include <charconv>
#include <cmath>
#include <stdexcept>

namespace oam
{
    std::string csv_quote(std::string_view field)
    {
        if (field.find_first_of(",\"\r\n") == std::string_view::npos)
            return std::string(field);
        std::string out = "\"";
        for (char c : field)
        {
            if (c == '"')
                out += '"';
            out += c;
        }
        out += '"';
        return out;
    }

    std::string format_number(double value)
    {
        if (!std::isfinite(value))
            throw std::domain_error("non-finite value in numeric CSV field");
        std::array<char, 64> buf{};
        auto [end, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), value);
        if (ec != std::errc())
            throw std::runtime_error("number formatting failed");
        return std::string(buf.data(), end);
    }

    std::string format_number(long long value)
    {
        return std::to_string(value);
    }

    void CsvWriter::header(std::initializer_list<std::string_view> names)
    {
        bool first = true;
        for (auto name : names)
        {
            if (!first)
                out_ << ',';
            out_ << csv_quote(name);
            first = false;
        }
        out_ << "\r\n";
    }

    void CsvWriter::row(const std::vector<std::string> &fields)
    {
        for (std::size_t i = 0; i < fields.size(); ++i)
        {
            if (i)
                out_ << ',';
            out_ << csv_quote(fields[i]);
        }
        out_ << "\r\n";
    }
}
