#ifndef CMFD_CODEC_HPP
#define CMFD_CODEC_HPP

// Image file I/O and the baseline JPEG codec, backed by OpenCV imgcodecs.

#include <cstdint>
#include <string>
#include <vector>

#include <opencv2/core.hpp>
#include <opencv2/imgcodecs.hpp>

#include "cmfd/errors.hpp"
#include "cmfd/image.hpp"

namespace cmfd {

namespace detail {

inline cv::Mat to_bgr_mat(const RgbImage& img) {
    cv::Mat m(img.height(), img.width(), CV_8UC3);
    for (int r = 0; r < img.height(); ++r) {
        auto* row = m.ptr<std::uint8_t>(r);
        for (int c = 0; c < img.width(); ++c) {
            row[3 * c + 0] = img.at(r, c, 2);
            row[3 * c + 1] = img.at(r, c, 1);
            row[3 * c + 2] = img.at(r, c, 0);
        }
    }
    return m;
}

inline RgbImage from_bgr_mat(const cv::Mat& m) {
    if (m.empty() || m.type() != CV_8UC3) throw CodecError("expected an 8-bit 3-channel raster");
    RgbImage img(m.cols, m.rows);
    for (int r = 0; r < m.rows; ++r) {
        const auto* row = m.ptr<std::uint8_t>(r);
        for (int c = 0; c < m.cols; ++c) img.set(r, c, row[3 * c + 2], row[3 * c + 1], row[3 * c]);
    }
    return img;
}

}  // namespace detail

/// Reads PNG, BMP, or baseline JPEG. Grayscale files come back with R = G = B.
inline RgbImage read_image(const std::string& path) {
    cv::Mat m;
    try {
        m = cv::imread(path, cv::IMREAD_COLOR);
    } catch (const cv::Exception& e) {
        throw CodecError(path + ": " + e.what());
    }
    if (m.empty()) throw CodecError(path + ": cannot read image");
    return detail::from_bgr_mat(m);
}

inline void write_png(const std::string& path, const RgbImage& img) {
    bool ok = false;
    try {
        ok = cv::imwrite(path, detail::to_bgr_mat(img), {cv::IMWRITE_PNG_COMPRESSION, 6});
    } catch (const cv::Exception& e) {
        throw CodecError(path + ": " + e.what());
    }
    if (!ok) throw CodecError(path + ": cannot write PNG");
}

/// Masks are written as 8-bit grayscale PNG, 0 black and 1 white.
inline void write_mask_png(const std::string& path, const BinaryMask& mask) {
    cv::Mat m(mask.height(), mask.width(), CV_8UC1);
    for (int r = 0; r < mask.height(); ++r)
        for (int c = 0; c < mask.width(); ++c) m.at<std::uint8_t>(r, c) = mask.get(r, c) ? 255 : 0;
    bool ok = false;
    try {
        ok = cv::imwrite(path, m);
    } catch (const cv::Exception& e) {
        throw CodecError(path + ": " + e.what());
    }
    if (!ok) throw CodecError(path + ": cannot write PNG");
}

/// Any nonzero pixel counts as set.
inline BinaryMask read_mask(const std::string& path) {
    cv::Mat m;
    try {
        m = cv::imread(path, cv::IMREAD_GRAYSCALE);
    } catch (const cv::Exception& e) {
        throw CodecError(path + ": " + e.what());
    }
    if (m.empty()) throw CodecError(path + ": cannot read mask");
    BinaryMask mask(m.cols, m.rows);
    for (int r = 0; r < m.rows; ++r)
        for (int c = 0; c < m.cols; ++c) mask.set(r, c, m.at<std::uint8_t>(r, c) != 0);
    return mask;
}

/// Baseline sequential JFIF encode at the given quality, then decode.
/// libjpeg scales its standard tables by 5000/qf below 50 and 200 - 2*qf above.
inline std::vector<std::uint8_t> encode_jpeg(const RgbImage& img, int qf) {
    if (qf < 1 || qf > 100) throw InvalidArgument("JPEG quality must be in [1, 100]");
    std::vector<std::uint8_t> buf;
    try {
        if (!cv::imencode(".jpg", detail::to_bgr_mat(img), buf, {cv::IMWRITE_JPEG_QUALITY, qf}))
            throw CodecError("JPEG encode failed");
    } catch (const cv::Exception& e) {
        throw CodecError(std::string("JPEG encode failed: ") + e.what());
    }
    return buf;
}

inline RgbImage decode_image(const std::vector<std::uint8_t>& buf) {
    cv::Mat m;
    try {
        m = cv::imdecode(buf, cv::IMREAD_COLOR);
    } catch (const cv::Exception& e) {
        throw CodecError(std::string("decode failed: ") + e.what());
    }
    if (m.empty()) throw CodecError("decode failed");
    return detail::from_bgr_mat(m);
}

}  // namespace cmfd

#endif  // CMFD_CODEC_HPP
