#pragma once

#include <arpa/inet.h>
#include <fcntl.h>
#include <netdb.h>
#include <netinet/in.h>
#include <netinet/tcp.h>
#include <poll.h>
#include <sys/socket.h>
#include <unistd.h>

#include <atomic>
#include <bit>
#include <chrono>
#include <complex>
#include <condition_variable>
#include <cstdint>
#include <cstring>
#include <mutex>
#include <string>
#include <thread>
#include <vector>

#include "gramcode/errors.hpp"
#include "gramcode/field.hpp"
#include "gramcode/matrix.hpp"
#include "gramcode/pool.hpp"

namespace gramcode::wire {

// Frame layout: 4-byte big-endian payload length, 1-byte message type,
// payload. Integers inside payloads are little-endian; floating point is
// IEEE-754 little-endian.
enum class MsgType : std::uint8_t {
    hello = 0x01,
    task = 0x02,
    response = 0x03,
    error = 0x7F,
};

inline constexpr std::size_t kFrameHeaderBytes = 5;
inline constexpr std::size_t kTaskMetaBytes = 25;     // task_id + q + rows + cols + mode
inline constexpr std::size_t kResponseMetaBytes = 12; // task_id + dim

struct Frame {
    MsgType type;
    std::vector<std::uint8_t> payload;

    bool operator==(const Frame& other) const = default;
};

namespace detail {

inline void put_u32_be(std::vector<std::uint8_t>& out, std::uint32_t v) {
    out.push_back(static_cast<std::uint8_t>(v >> 24));
    out.push_back(static_cast<std::uint8_t>(v >> 16));
    out.push_back(static_cast<std::uint8_t>(v >> 8));
    out.push_back(static_cast<std::uint8_t>(v));
}

inline void put_u32_le(std::vector<std::uint8_t>& out, std::uint32_t v) {
    for (int i = 0; i < 4; ++i) out.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
}

inline void put_u64_le(std::vector<std::uint8_t>& out, std::uint64_t v) {
    for (int i = 0; i < 8; ++i) out.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
}

inline void put_f64_le(std::vector<std::uint8_t>& out, double v) {
    put_u64_le(out, std::bit_cast<std::uint64_t>(v));
}

class Reader {
public:
    Reader(const std::uint8_t* data, std::size_t size) : data_(data), size_(size) {}

    std::uint32_t u32_le() {
        need(4);
        std::uint32_t v = 0;
        for (int i = 0; i < 4; ++i) v |= static_cast<std::uint32_t>(data_[pos_ + i]) << (8 * i);
        pos_ += 4;
        return v;
    }

    std::uint64_t u64_le() {
        need(8);
        std::uint64_t v = 0;
        for (int i = 0; i < 8; ++i) v |= static_cast<std::uint64_t>(data_[pos_ + i]) << (8 * i);
        pos_ += 8;
        return v;
    }

    std::uint8_t u8() {
        need(1);
        return data_[pos_++];
    }

    double f64_le() { return std::bit_cast<double>(u64_le()); }

    std::size_t remaining() const { return size_ - pos_; }

private:
    void need(std::size_t n) const {
        if (pos_ + n > size_) throw Truncated("payload ends mid-field");
    }
    const std::uint8_t* data_;
    std::size_t size_;
    std::size_t pos_ = 0;
};

} // namespace detail

inline std::vector<std::uint8_t> encode_frame(const Frame& frame) {
    std::vector<std::uint8_t> out;
    out.reserve(kFrameHeaderBytes + frame.payload.size());
    detail::put_u32_be(out, static_cast<std::uint32_t>(frame.payload.size()));
    out.push_back(static_cast<std::uint8_t>(frame.type));
    out.insert(out.end(), frame.payload.begin(), frame.payload.end());
    return out;
}

/// Decodes a buffer holding exactly one frame.
inline Frame decode_frame(const std::vector<std::uint8_t>& bytes) {
    if (bytes.size() < kFrameHeaderBytes) throw Truncated("frame shorter than its header");
    const std::uint32_t len = (static_cast<std::uint32_t>(bytes[0]) << 24) |
                              (static_cast<std::uint32_t>(bytes[1]) << 16) |
                              (static_cast<std::uint32_t>(bytes[2]) << 8) |
                              static_cast<std::uint32_t>(bytes[3]);
    if (bytes.size() < kFrameHeaderBytes + len) throw Truncated("frame shorter than declared length");
    if (bytes.size() > kFrameHeaderBytes + len) throw Malformed("declared length does not match payload");
    const std::uint8_t type = bytes[4];
    if (type != 0x01 && type != 0x02 && type != 0x03 && type != 0x7F)
        throw Malformed("unknown message type");
    Frame frame{static_cast<MsgType>(type), {}};
    frame.payload.assign(bytes.begin() + kFrameHeaderBytes, bytes.end());
    return frame;
}

struct TaskPayload {
    std::uint64_t task_id = 0;
    std::uint64_t modulus = 0; // unused in analog mode
    std::uint32_t rows = 0;
    std::uint32_t cols = 0;
    bool analog = false;
    std::vector<std::uint64_t> field_entries;
    std::vector<std::complex<double>> analog_entries;
};

inline Frame make_task_frame(std::uint64_t task_id, std::uint64_t modulus, const FieldMatrix& m) {
    Frame frame{MsgType::task, {}};
    auto& out = frame.payload;
    out.reserve(kTaskMetaBytes + m.size() * 8);
    detail::put_u64_le(out, task_id);
    detail::put_u64_le(out, modulus);
    detail::put_u32_le(out, static_cast<std::uint32_t>(m.rows()));
    detail::put_u32_le(out, static_cast<std::uint32_t>(m.cols()));
    out.push_back(0); // field mode
    for (std::uint64_t v : m.data()) detail::put_u64_le(out, v);
    return frame;
}

inline Frame make_task_frame(std::uint64_t task_id, const ComplexMatrix& m) {
    Frame frame{MsgType::task, {}};
    auto& out = frame.payload;
    out.reserve(kTaskMetaBytes + m.data().size() * 16);
    detail::put_u64_le(out, task_id);
    detail::put_u64_le(out, 0);
    detail::put_u32_le(out, static_cast<std::uint32_t>(m.rows()));
    detail::put_u32_le(out, static_cast<std::uint32_t>(m.cols()));
    out.push_back(1); // analog mode
    for (const auto& v : m.data()) {
        detail::put_f64_le(out, v.real());
        detail::put_f64_le(out, v.imag());
    }
    return frame;
}

inline TaskPayload parse_task(const Frame& frame) {
    if (frame.type != MsgType::task) throw Malformed("not a TASK frame");
    detail::Reader rd(frame.payload.data(), frame.payload.size());
    TaskPayload task;
    task.task_id = rd.u64_le();
    task.modulus = rd.u64_le();
    task.rows = rd.u32_le();
    task.cols = rd.u32_le();
    const std::uint8_t mode = rd.u8();
    if (mode > 1) throw Malformed("unknown task mode");
    task.analog = mode == 1;
    const std::size_t n = static_cast<std::size_t>(task.rows) * task.cols;
    const std::size_t per_entry = task.analog ? 16 : 8;
    if (rd.remaining() != n * per_entry) throw Malformed("entry block does not match declared shape");
    if (task.analog) {
        task.analog_entries.reserve(n);
        for (std::size_t i = 0; i < n; ++i) {
            double re = rd.f64_le();
            double im = rd.f64_le();
            task.analog_entries.emplace_back(re, im);
        }
    } else {
        task.field_entries.reserve(n);
        for (std::size_t i = 0; i < n; ++i) task.field_entries.push_back(rd.u64_le());
    }
    return task;
}

inline Frame make_response_frame(std::uint64_t task_id, const PackedLowerTriangle<std::uint64_t>& tri) {
    Frame frame{MsgType::response, {}};
    auto& out = frame.payload;
    out.reserve(kResponseMetaBytes + tri.entries.size() * 8);
    detail::put_u64_le(out, task_id);
    detail::put_u32_le(out, static_cast<std::uint32_t>(tri.dim));
    for (std::uint64_t v : tri.entries) detail::put_u64_le(out, v);
    return frame;
}

inline Frame make_response_frame(std::uint64_t task_id,
                                 const PackedLowerTriangle<std::complex<double>>& tri) {
    Frame frame{MsgType::response, {}};
    auto& out = frame.payload;
    out.reserve(kResponseMetaBytes + tri.entries.size() * 16);
    detail::put_u64_le(out, task_id);
    detail::put_u32_le(out, static_cast<std::uint32_t>(tri.dim));
    for (const auto& v : tri.entries) {
        detail::put_f64_le(out, v.real());
        detail::put_f64_le(out, v.imag());
    }
    return frame;
}

struct ResponsePayload {
    std::uint64_t task_id = 0;
    std::uint32_t dim = 0;
    PackedLowerTriangle<std::uint64_t> field_triangle;
    PackedLowerTriangle<std::complex<double>> analog_triangle;
};

inline ResponsePayload parse_response(const Frame& frame, bool analog) {
    if (frame.type != MsgType::response) throw Malformed("not a RESPONSE frame");
    detail::Reader rd(frame.payload.data(), frame.payload.size());
    ResponsePayload resp;
    resp.task_id = rd.u64_le();
    resp.dim = rd.u32_le();
    const std::size_t n = PackedLowerTriangle<std::uint64_t>::packed_size(resp.dim);
    const std::size_t per_entry = analog ? 16 : 8;
    if (rd.remaining() != n * per_entry) throw Malformed("triangle block does not match dimension");
    if (analog) {
        resp.analog_triangle.dim = resp.dim;
        resp.analog_triangle.entries.reserve(n);
        for (std::size_t i = 0; i < n; ++i) {
            double re = rd.f64_le();
            double im = rd.f64_le();
            resp.analog_triangle.entries.emplace_back(re, im);
        }
    } else {
        resp.field_triangle.dim = resp.dim;
        resp.field_triangle.entries.reserve(n);
        for (std::size_t i = 0; i < n; ++i) resp.field_triangle.entries.push_back(rd.u64_le());
    }
    return resp;
}

namespace detail {

inline bool read_exact(int fd, std::uint8_t* buf, std::size_t n) {
    std::size_t got = 0;
    while (got < n) {
        ssize_t r = ::recv(fd, buf + got, n - got, 0);
        if (r <= 0) return false;
        got += static_cast<std::size_t>(r);
    }
    return true;
}

inline bool write_all(int fd, const std::uint8_t* buf, std::size_t n) {
    std::size_t sent = 0;
    while (sent < n) {
        ssize_t r = ::send(fd, buf + sent, n - sent, MSG_NOSIGNAL);
        if (r <= 0) return false;
        sent += static_cast<std::size_t>(r);
    }
    return true;
}

/// Reads one frame off a socket; returns false on clean EOF before any byte.
inline bool read_frame(int fd, Frame& frame) {
    std::uint8_t header[kFrameHeaderBytes];
    if (!read_exact(fd, header, kFrameHeaderBytes)) return false;
    const std::uint32_t len = (static_cast<std::uint32_t>(header[0]) << 24) |
                              (static_cast<std::uint32_t>(header[1]) << 16) |
                              (static_cast<std::uint32_t>(header[2]) << 8) |
                              static_cast<std::uint32_t>(header[3]);
    if (len > (1u << 30)) return false;
    std::vector<std::uint8_t> buf(kFrameHeaderBytes + len);
    std::memcpy(buf.data(), header, kFrameHeaderBytes);
    if (len > 0 && !read_exact(fd, buf.data() + kFrameHeaderBytes, len)) return false;
    frame = decode_frame(buf);
    return true;
}

inline bool write_frame(int fd, const Frame& frame) {
    auto bytes = encode_frame(frame);
    return write_all(fd, bytes.data(), bytes.size());
}

inline Frame error_frame(const std::string& message) {
    Frame f{MsgType::error, {}};
    f.payload.assign(message.begin(), message.end());
    return f;
}

inline int connect_with_timeout(const std::string& host, std::uint16_t port,
                                std::chrono::milliseconds timeout) {
    addrinfo hints{};
    hints.ai_family = AF_INET;
    hints.ai_socktype = SOCK_STREAM;
    addrinfo* res = nullptr;
    if (::getaddrinfo(host.c_str(), std::to_string(port).c_str(), &hints, &res) != 0) return -1;
    int fd = ::socket(res->ai_family, res->ai_socktype, res->ai_protocol);
    if (fd < 0) {
        ::freeaddrinfo(res);
        return -1;
    }
    ::fcntl(fd, F_SETFL, O_NONBLOCK);
    int rc = ::connect(fd, res->ai_addr, res->ai_addrlen);
    ::freeaddrinfo(res);
    if (rc != 0 && errno == EINPROGRESS) {
        pollfd pfd{fd, POLLOUT, 0};
        rc = ::poll(&pfd, 1, static_cast<int>(timeout.count()));
        int err = 0;
        socklen_t len = sizeof(err);
        if (rc <= 0 || ::getsockopt(fd, SOL_SOCKET, SO_ERROR, &err, &len) != 0 || err != 0) {
            ::close(fd);
            return -1;
        }
    } else if (rc != 0) {
        ::close(fd);
        return -1;
    }
    // back to blocking with send/recv timeouts
    ::fcntl(fd, F_SETFL, ::fcntl(fd, F_GETFL) & ~O_NONBLOCK);
    timeval tv{};
    tv.tv_sec = static_cast<long>(timeout.count() / 1000);
    tv.tv_usec = static_cast<long>((timeout.count() % 1000) * 1000);
    ::setsockopt(fd, SOL_SOCKET, SO_RCVTIMEO, &tv, sizeof(tv));
    ::setsockopt(fd, SOL_SOCKET, SO_SNDTIMEO, &tv, sizeof(tv));
    return fd;
}

} // namespace detail

/// Stateless worker server: every TASK frame is self-contained, so
/// connections are handled concurrently and independently.
class WorkerServer {
public:
    explicit WorkerServer(std::uint16_t port = 0) {
        listen_fd_ = ::socket(AF_INET, SOCK_STREAM, 0);
        if (listen_fd_ < 0) throw Error("cannot create listening socket");
        int one = 1;
        ::setsockopt(listen_fd_, SOL_SOCKET, SO_REUSEADDR, &one, sizeof(one));
        sockaddr_in addr{};
        addr.sin_family = AF_INET;
        addr.sin_addr.s_addr = htonl(INADDR_ANY);
        addr.sin_port = htons(port);
        if (::bind(listen_fd_, reinterpret_cast<sockaddr*>(&addr), sizeof(addr)) != 0 ||
            ::listen(listen_fd_, 64) != 0) {
            ::close(listen_fd_);
            throw Error("cannot bind/listen on port " + std::to_string(port));
        }
        socklen_t len = sizeof(addr);
        ::getsockname(listen_fd_, reinterpret_cast<sockaddr*>(&addr), &len);
        port_ = ntohs(addr.sin_port);
        running_ = true;
        accept_thread_ = std::thread([this] { accept_loop(); });
    }

    WorkerServer(const WorkerServer&) = delete;
    WorkerServer& operator=(const WorkerServer&) = delete;

    ~WorkerServer() { stop(); }

    std::uint16_t port() const { return port_; }

    void stop() {
        bool was_running = running_.exchange(false);
        if (!was_running) return;
        ::shutdown(listen_fd_, SHUT_RDWR);
        ::close(listen_fd_);
        if (accept_thread_.joinable()) accept_thread_.join();
        std::unique_lock<std::mutex> lock(handlers_mutex_);
        idle_.wait(lock, [this] { return active_handlers_ == 0; });
    }

private:
    void accept_loop() {
        while (running_) {
            int fd = ::accept(listen_fd_, nullptr, nullptr);
            if (fd < 0) break;
            {
                std::lock_guard<std::mutex> lock(handlers_mutex_);
                ++active_handlers_;
            }
            std::thread([this, fd] {
                handle_connection(fd);
                std::lock_guard<std::mutex> lock(handlers_mutex_);
                if (--active_handlers_ == 0) idle_.notify_all();
            }).detach();
        }
    }

    static void handle_connection(int fd) {
        Frame frame;
        while (detail::read_frame(fd, frame)) {
            try {
                if (frame.type == MsgType::hello) {
                    detail::write_frame(fd, Frame{MsgType::hello, {}});
                } else if (frame.type == MsgType::task) {
                    detail::write_frame(fd, run_task(parse_task(frame)));
                } else {
                    detail::write_frame(fd, detail::error_frame("unexpected message type"));
                }
            } catch (const std::exception& e) {
                detail::write_frame(fd, detail::error_frame(e.what()));
            }
        }
        ::close(fd);
    }

    static Frame run_task(const TaskPayload& task) {
        if (task.analog) {
            ComplexMatrix m(task.rows, task.cols);
            for (std::size_t i = 0; i < task.analog_entries.size(); ++i)
                m.at(i / task.cols, i % task.cols) = task.analog_entries[i];
            return make_response_frame(task.task_id, gram_lower(m));
        }
        PrimeField field(task.modulus);
        FieldMatrix m(field, task.rows, task.cols);
        for (std::size_t i = 0; i < task.field_entries.size(); ++i)
            m.at(i / task.cols, i % task.cols) = field.reduce(task.field_entries[i]);
        return make_response_frame(task.task_id, gram_lower(m));
    }

    int listen_fd_ = -1;
    std::uint16_t port_ = 0;
    std::atomic<bool> running_{false};
    std::thread accept_thread_;
    std::mutex handlers_mutex_;
    std::condition_variable idle_;
    std::size_t active_handlers_ = 0;
};

struct Endpoint {
    std::string host;
    std::uint16_t port = 0;
};

inline std::vector<Endpoint> parse_endpoints(const std::string& list) {
    std::vector<Endpoint> eps;
    std::size_t start = 0;
    while (start < list.size()) {
        std::size_t comma = list.find(',', start);
        if (comma == std::string::npos) comma = list.size();
        const std::string item = list.substr(start, comma - start);
        const std::size_t colon = item.rfind(':');
        if (colon == std::string::npos) throw Malformed("endpoint must be host:port");
        eps.push_back(Endpoint{item.substr(0, colon),
                               static_cast<std::uint16_t>(std::stoul(item.substr(colon + 1)))});
        start = comma + 1;
    }
    return eps;
}

namespace detail {

template <typename Share, typename Resp, typename MakeTask, typename ParseResp>
DispatchResult<Share, Resp> dispatch_remote_impl(const std::vector<Endpoint>& endpoints,
                                                 const std::vector<Share>& shares,
                                                 MakeTask&& make_task, ParseResp&& parse_resp,
                                                 TaskTrace& trace, std::chrono::milliseconds timeout) {
    if (endpoints.size() != shares.size())
        throw Error("need exactly one endpoint per share");
    const std::size_t n = shares.size();

    DispatchResult<Share, Resp> result;
    result.responses.resize(n);
    std::mutex mu;
    std::atomic<std::uint64_t> bytes_up{0}, bytes_down{0};

    std::vector<std::thread> threads;
    threads.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
        threads.emplace_back([&, i] {
            int fd = connect_with_timeout(endpoints[i].host, endpoints[i].port, timeout);
            if (fd < 0) return;
            const Frame task = make_task(static_cast<std::uint64_t>(i), shares[i]);
            const auto encoded = encode_frame(task);
            bool ok = write_all(fd, encoded.data(), encoded.size());
            if (ok) bytes_up += encoded.size();
            Frame reply;
            if (ok && read_frame(fd, reply) && reply.type == MsgType::response) {
                try {
                    Resp resp = parse_resp(reply, static_cast<std::uint64_t>(i));
                    bytes_down += kFrameHeaderBytes + reply.payload.size();
                    std::lock_guard<std::mutex> lock(mu);
                    result.responses[i] = std::move(resp);
                    result.completion_order.push_back(i);
                } catch (const std::exception&) {
                    // malformed reply counts as a straggler
                }
            }
            ::close(fd);
        });
    }
    for (auto& t : threads) t.join();

    trace.n_workers = n;
    trace.responders = result.completion_order;
    for (std::size_t i = 0; i < n; ++i)
        if (!result.responses[i]) trace.dropped.push_back(i);
    trace.wire_upload_bytes = bytes_up;
    trace.wire_download_bytes = bytes_down;
    return result;
}

} // namespace detail

/// Drop-in network implementation of the pool dispatch for field Gram
/// tasks. Unreachable or timed-out endpoints become stragglers.
inline DispatchResult<FieldMatrix, PackedLowerTriangle<std::uint64_t>> dispatch_remote(
    const std::vector<Endpoint>& endpoints, const std::vector<FieldMatrix>& shares,
    const PrimeField& field, TaskTrace& trace,
    std::chrono::milliseconds timeout = std::chrono::milliseconds(5000)) {
    const std::uint64_t q = field.modulus();
    return detail::dispatch_remote_impl<FieldMatrix, PackedLowerTriangle<std::uint64_t>>(
        endpoints, shares,
        [q](std::uint64_t id, const FieldMatrix& m) { return make_task_frame(id, q, m); },
        [](const Frame& frame, std::uint64_t id) {
            auto resp = parse_response(frame, false);
            if (resp.task_id != id) throw Malformed("response for a different task");
            return resp.field_triangle;
        },
        trace, timeout);
}

inline DispatchResult<ComplexMatrix, PackedLowerTriangle<std::complex<double>>> dispatch_remote_analog(
    const std::vector<Endpoint>& endpoints, const std::vector<ComplexMatrix>& shares, TaskTrace& trace,
    std::chrono::milliseconds timeout = std::chrono::milliseconds(5000)) {
    return detail::dispatch_remote_impl<ComplexMatrix, PackedLowerTriangle<std::complex<double>>>(
        endpoints, shares,
        [](std::uint64_t id, const ComplexMatrix& m) { return make_task_frame(id, m); },
        [](const Frame& frame, std::uint64_t id) {
            auto resp = parse_response(frame, true);
            if (resp.task_id != id) throw Malformed("response for a different task");
            return resp.analog_triangle;
        },
        trace, timeout);
}

} // namespace gramcode::wire
