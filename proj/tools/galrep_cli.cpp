#include "galrep/pipeline.hpp"

int main(int argc, char** argv) {
    return galrep::cmd_dispatch(argc, argv);
}
