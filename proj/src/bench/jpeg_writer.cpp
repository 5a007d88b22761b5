#include "dctpipe/bench/jpeg_writer.hpp"

#include <cstdio>
#include <jpeglib.h>

#include <csetjmp>
#include <cstring>

#include "dctpipe/error.hpp"

namespace dctpipe::bench {

namespace {

struct ErrorTrap {
    jpeg_error_mgr mgr;
    std::jmp_buf jump;
    char message[JMSG_LENGTH_MAX] = {};
};

void on_error(j_common_ptr cinfo) {
    auto* trap = reinterpret_cast<ErrorTrap*>(cinfo->err);
    (*cinfo->err->format_message)(cinfo, trap->message);
    std::longjmp(trap->jump, 1);
}

std::vector<std::uint8_t> encode(const std::uint8_t* pixels, int width, int height, int quality,
                                 bool gray, Subsampling subsampling, int restartIntervalMcus) {
    jpeg_compress_struct cinfo;
    ErrorTrap trap;
    cinfo.err = jpeg_std_error(&trap.mgr);
    trap.mgr.error_exit = on_error;

    unsigned char* buffer = nullptr;
    unsigned long bufferSize = 0;
    if (setjmp(trap.jump)) {
        jpeg_destroy_compress(&cinfo);
        if (buffer) free(buffer);
        throw Error(ErrorCode::UnwritableOutput, std::string("jpeg encode failed: ") + trap.message);
    }

    jpeg_create_compress(&cinfo);
    jpeg_mem_dest(&cinfo, &buffer, &bufferSize);

    cinfo.image_width = static_cast<JDIMENSION>(width);
    cinfo.image_height = static_cast<JDIMENSION>(height);
    cinfo.input_components = gray ? 1 : 3;
    cinfo.in_color_space = gray ? JCS_GRAYSCALE : JCS_RGB;
    jpeg_set_defaults(&cinfo);
    jpeg_set_quality(&cinfo, quality, TRUE);
    if (!gray) {
        const int factor = subsampling == Subsampling::S420 ? 2 : 1;
        cinfo.comp_info[0].h_samp_factor = factor;
        cinfo.comp_info[0].v_samp_factor = factor;
        cinfo.comp_info[1].h_samp_factor = 1;
        cinfo.comp_info[1].v_samp_factor = 1;
        cinfo.comp_info[2].h_samp_factor = 1;
        cinfo.comp_info[2].v_samp_factor = 1;
    }
    cinfo.restart_interval = static_cast<unsigned>(restartIntervalMcus);

    jpeg_start_compress(&cinfo, TRUE);
    const int rowStride = width * cinfo.input_components;
    while (cinfo.next_scanline < cinfo.image_height) {
        JSAMPROW row = const_cast<JSAMPROW>(pixels + cinfo.next_scanline * rowStride);
        jpeg_write_scanlines(&cinfo, &row, 1);
    }
    jpeg_finish_compress(&cinfo);
    jpeg_destroy_compress(&cinfo);

    std::vector<std::uint8_t> out(buffer, buffer + bufferSize);
    free(buffer);
    return out;
}

}  // namespace

std::vector<std::uint8_t> encode_jpeg_rgb(const std::uint8_t* rgb, int width, int height,
                                          int quality, Subsampling subsampling,
                                          int restartIntervalMcus) {
    return encode(rgb, width, height, quality, false, subsampling, restartIntervalMcus);
}

std::vector<std::uint8_t> encode_jpeg_gray(const std::uint8_t* gray, int width, int height,
                                           int quality) {
    return encode(gray, width, height, quality, true, Subsampling::S444, 0);
}

}  // namespace dctpipe::bench
