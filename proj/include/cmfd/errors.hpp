#ifndef CMFD_ERRORS_HPP
#define CMFD_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace cmfd {

// Every error raised by the library derives from cmfd::Error.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class InvalidArgument : public Error {
public:
    using Error::Error;
};

class BlockTooLarge : public Error {
public:
    BlockTooLarge(int b, int width, int height)
        : Error("block size " + std::to_string(b) + " exceeds image " + std::to_string(width) +
                "x" + std::to_string(height)) {}
};

class OutOfBounds : public Error {
public:
    using Error::Error;
};

class ImageTooSmall : public Error {
public:
    using Error::Error;
};

class OverlapError : public Error {
public:
    using Error::Error;
};

class CodecError : public Error {
public:
    using Error::Error;
};

class EmptyGroundTruth : public Error {
public:
    EmptyGroundTruth() : Error("ground-truth masks are empty") {}
};

}  // namespace cmfd

#endif  // CMFD_ERRORS_HPP
