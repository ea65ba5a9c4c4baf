#include "lipcurv/cli.hpp"

int main(int argc, char** argv)
{
    return lipcurv::run(argc, argv);
}
