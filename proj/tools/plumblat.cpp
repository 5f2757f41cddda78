#include <iostream>
int main() { std::cout << "plumblat placeholder\n"; return 0; }
