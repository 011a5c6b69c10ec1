#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "tandem/errors.hpp"

namespace tandem {

class BindError : public Error {
public:
    using Error::Error;
};

// Thin POSIX UDP socket, one datagram per send/recv.
class UdpSocket {
public:
    UdpSocket();
    ~UdpSocket();
    UdpSocket(const UdpSocket&) = delete;
    UdpSocket& operator=(const UdpSocket&) = delete;

    void bind(const std::string& host, std::uint16_t port);
    void connect(const std::string& host, std::uint16_t port);

    void send(const std::uint8_t* data, std::size_t size);

    // Blocks up to timeout_ms; empty optional on timeout.
    std::optional<std::vector<std::uint8_t>> recv(int timeout_ms);

private:
    int fd_ = -1;
};

// "host:port" -> (host, port)
std::pair<std::string, std::uint16_t> parse_endpoint(const std::string& text);

}  // namespace tandem
