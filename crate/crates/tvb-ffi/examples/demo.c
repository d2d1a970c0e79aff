/* Minimal consumer of the tvb C ABI.
 *
 * Build (from the repository root, after `cargo build --release`):
 *
 *   gcc -std=c11 -Wall -Wextra \
 *       -I crates/tvb-ffi/include crates/tvb-ffi/examples/demo.c \
 *       -L target/release -ltvb_ffi -lm -o demo
 *   LD_LIBRARY_PATH=target/release ./demo
 */

#include <stdio.h>
#include <stdlib.h>
#include "tvb.h"

static void fail(const char *what) {
    char *msg = tvb_last_error_message();
    fprintf(stderr, "%s failed: %s\n", what, msg ? msg : "(no message)");
    tvb_string_free(msg);
    exit(1);
}

int main(void) {
    printf("tvb %s\n", tvb_version());

    /* homological connectivity of a chessboard complex */
    TvbComplex *board = NULL;
    if (tvb_chessboard_new(5, 3, &board) != TvbStatus_Ok)
        fail("tvb_chessboard_new");
    char *json = NULL;
    if (tvb_complex_connectivity_json(board, "", &json) != TvbStatus_Ok)
        fail("tvb_complex_connectivity_json");
    printf("connectivity of the 5x3 board: %s\n", json);
    tvb_string_free(json);
    tvb_complex_free(board);

    /* is a rainbow Tverberg partition guaranteed for these class sizes? */
    uint64_t cards[3] = {5, 2, 2};
    if (tvb_criterion_json(2, 3, cards, 3, &json) != TvbStatus_Ok)
        fail("tvb_criterion_json");
    printf("criterion for d=2, r=3, cards (5,2,2): %s\n", json);
    tvb_string_free(json);

    /* search a concrete configuration, witness included */
    const char *config =
        "{\"dimension\": 2,"
        " \"points\": [[\"0/1\",\"0/1\"],[\"2/1\",\"2/1\"],[\"0/1\",\"2/1\"],[\"2/1\",\"0/1\"]],"
        " \"colors\": [[0,2],[1,3]]}";
    if (tvb_find_tverberg_json(config, 2, &json) != TvbStatus_Ok)
        fail("tvb_find_tverberg_json");
    printf("crossing segments: %s\n", json);
    tvb_string_free(json);

    return 0;
}
