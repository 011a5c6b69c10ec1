#include "tandem/udp.hpp"

#include <arpa/inet.h>
#include <netinet/in.h>
#include <poll.h>
#include <sys/socket.h>
#include <unistd.h>

#include <cerrno>
#include <cstring>

namespace tandem {

namespace {

sockaddr_in resolve(const std::string& host, std::uint16_t port) {
    sockaddr_in addr{};
    addr.sin_family = AF_INET;
    addr.sin_port = htons(port);
    const std::string h = host.empty() ? "0.0.0.0" : host;
    if (inet_pton(AF_INET, h.c_str(), &addr.sin_addr) != 1) {
        throw BindError("cannot parse IPv4 address '" + host + "'");
    }
    return addr;
}

}  // namespace

UdpSocket::UdpSocket() {
    fd_ = ::socket(AF_INET, SOCK_DGRAM, 0);
    if (fd_ < 0) {
        throw BindError(std::string("socket: ") + std::strerror(errno));
    }
}

UdpSocket::~UdpSocket() {
    if (fd_ >= 0) {
        ::close(fd_);
    }
}

void UdpSocket::bind(const std::string& host, std::uint16_t port) {
    const sockaddr_in addr = resolve(host, port);
    if (::bind(fd_, reinterpret_cast<const sockaddr*>(&addr), sizeof(addr)) != 0) {
        throw BindError("bind " + host + ":" + std::to_string(port) + ": " +
                        std::strerror(errno));
    }
}

void UdpSocket::connect(const std::string& host, std::uint16_t port) {
    const sockaddr_in addr = resolve(host, port);
    if (::connect(fd_, reinterpret_cast<const sockaddr*>(&addr), sizeof(addr)) != 0) {
        throw BindError("connect " + host + ":" + std::to_string(port) + ": " +
                        std::strerror(errno));
    }
}

void UdpSocket::send(const std::uint8_t* data, std::size_t size) {
    if (::send(fd_, data, size, 0) < 0) {
        throw Error(std::string("send: ") + std::strerror(errno));
    }
}

std::optional<std::vector<std::uint8_t>> UdpSocket::recv(int timeout_ms) {
    pollfd pfd{fd_, POLLIN, 0};
    const int rc = ::poll(&pfd, 1, timeout_ms);
    if (rc <= 0) {
        return std::nullopt;
    }
    std::vector<std::uint8_t> buf(2048);
    const ssize_t n = ::recv(fd_, buf.data(), buf.size(), 0);
    if (n < 0) {
        return std::nullopt;
    }
    buf.resize(static_cast<std::size_t>(n));
    return buf;
}

std::pair<std::string, std::uint16_t> parse_endpoint(const std::string& text) {
    const auto colon = text.rfind(':');
    if (colon == std::string::npos) {
        throw ConfigError("endpoint must look like host:port, got '" + text + "'");
    }
    const std::string host = text.substr(0, colon);
    const std::string port_str = text.substr(colon + 1);
    try {
        const unsigned long port = std::stoul(port_str);
        if (port == 0 || port > 65535) {
            throw std::out_of_range("port");
        }
        return {host, static_cast<std::uint16_t>(port)};
    } catch (const std::exception&) {
        throw ConfigError("bad port in endpoint '" + text + "'");
    }
}

}  // namespace tandem
