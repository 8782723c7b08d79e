// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <algorithm>
#include <atomic>
#include <exception>
#include <thread>

namespace oam
{
    template <typename T>
    std::vector<T> parallel_map(std::size_t count, int workers, const std::function<T(std::size_t)> &fn)
    {
        std::vector<std::optional<T>> slots(count);
        std::vector<std::exception_ptr> errors(count);
        std::atomic<std::size_t> next{0};

        auto work = [&] {
            for (std::size_t i = next++; i < count; i = next++)
            {
                try
                {
                    slots[i].emplace(fn(i));
                }
                catch (...)
                {
                    errors[i] = std::current_exception();
                }
            }
        };

        const std::size_t threads = std::min<std::size_t>(std::max(workers, 1), std::max<std::size_t>(count, 1));
        if (threads <= 1)
            work();
        else
        {
            std::vector<std::jthread> pool;
            for (std::size_t t = 0; t < threads; ++t)
                pool.emplace_back(work);
        }

        for (const auto &e : errors)
            if (e)
                std::rethrow_exception(e);
        std::vector<T> out;
        out.reserve(count);
        for (auto &s : slots)
            out.push_back(std::move(*s));
        return out;
    }
}
