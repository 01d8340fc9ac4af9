#include <iostream>

int main() {
    std::cout << "heliocast: pipeline commands land here later in the build\n";
    return 0;
}
