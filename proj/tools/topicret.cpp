#include "topicret/cli.hpp"

int main(int argc, char** argv) {
    return topicret::cli::run(argc, argv);
}
